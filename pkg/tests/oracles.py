"""Independent reference computations used only by the tests.

Nothing here calls the closed forms under test; each oracle rebuilds its
quantity from definitions by brute force.
"""
from itertools import combinations

import numpy as np


def kron_elementwise(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_transpose_loops(rho, da, db):
    out = np.zeros_like(rho)
    for i in range(da):
        for j in range(db):
            for k in range(da):
                for l in range(db):
                    out[i * db + j, k * db + l] = rho[i * db + l, k * db + j]
    return out


def bell_vector(k, l, d):
    v = np.zeros(d * d, dtype=complex)
    for j in range(d):
        v[j * d + (j + k) % d] = np.exp(2j * np.pi * j * l / d) / np.sqrt(d)
    return v


def four_party_projection(p, q, d, k, l):
    """Project B and D of sqrt(p)|jj>_AB (x) sqrt(q)|jj>_CD onto Bell vector (k, l).

    Returns the unnormalized AC vector; its squared norm is the probability.
    """
    phi = np.zeros(d * d)
    psi = np.zeros(d * d)
    for j in range(d):
        phi[j * d + j] = np.sqrt(p[j])
        psi[j * d + j] = np.sqrt(q[j])
    big = np.kron(phi, psi).reshape(d, d, d, d)  # a, b, c, dd
    m = big.transpose(0, 2, 1, 3).reshape(d * d, d * d)  # (a c), (b dd)
    return m @ bell_vector(k, l, d).conj()


def bound_direct(p, q, d):
    total = 0.0
    for k in range(d):
        for j in range(d):
            for jp in range(j + 1, d):
                total += np.sqrt(p[j] * p[jp]) * np.sqrt(q[(j + k) % d] * q[(jp + k) % d])
    return 2.0 * total / (d - 1)


def negativity_by_eigs(rho, da, db):
    ev = np.linalg.eigvalsh(partial_transpose_loops(rho, da, db))
    return (np.sum(np.abs(ev)) - 1.0) / (min(da, db) - 1)


def cyclic_class(d, l):
    return {tuple(sorted((j, (j + l) % d))) for j in range(d)}


def partition_sums_enumerated(p, d):
    """s_l / t_l by walking each cyclic class of index pairs explicitly."""
    sums = []
    for l in range(1, d // 2 + 1):
        sums.append(sum(np.sqrt(p[i] * p[j]) for i, j in sorted(cyclic_class(d, l))))
    return np.array(sums)


def all_pairs(d):
    return set(combinations(range(d), 2))
