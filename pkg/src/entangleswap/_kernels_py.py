"""Pure numpy implementation of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the extension is tested against. Both modules expose the same
three functions with identical semantics.
"""
import numpy as np

_PHASES = (1.0 + 0.0j, 1.0j)  # e^{i phi} for phi = 0, pi/2
_HALF_PI = 0.5 * np.pi


def member_scores(members, d_a, d_b):
    """Per-member ``(sum of singular values)**2 - squared norm``.

    For an unnormalized member ``sqrt(w) |psi>`` this equals
    ``w * (d - 1) * N(psi)``, so summing and dividing by ``d - 1`` gives
    the average negativity of the decomposition.
    """
    members = np.asarray(members, dtype=np.complex128)
    m = members.shape[0]
    if m == 0:
        return np.zeros(0)
    s = np.linalg.svd(members.reshape(m, d_a, d_b), compute_uv=False)
    return s.sum(axis=1) ** 2 - np.einsum("ij,ij->i", members.real, members.real) \
        - np.einsum("ij,ij->i", members.imag, members.imag)


def _rotate(xa, xb, theta, e):
    c, s = np.cos(theta), np.sin(theta)
    return c * xa + s * e * xb, -s * np.conj(e) * xa + c * xb


def coordinate_sweep(members, d_a, d_b, sign, step, scores):
    """One pass of derivative-free line searches over two-member rotations.

    For each pair ``(a, b)`` and phase ``phi`` in ``(0, pi/2)`` the rotation
    ``x_a <- c x_a + s e^{i phi} x_b``, ``x_b <- -s e^{-i phi} x_a + c x_b``
    is probed at angles ``+-step``; a parabola through the three values
    proposes a further angle. The best probe is kept if it raises
    ``sign * score``. *members* and *scores* are updated in place; the
    number of accepted moves is returned.
    """
    m = members.shape[0]
    accepted = 0
    for a in range(m - 1):
        for b in range(a + 1, m):
            for e in _PHASES:
                xa, xb = members[a], members[b]
                g0 = sign * (scores[a] + scores[b])
                pa, pb = _rotate(xa, xb, np.array([[step], [-step]]), e)
                sc = member_scores(np.concatenate([pa, pb]), d_a, d_b)
                cand = [(step, pa[0], pb[0], sc[0], sc[2]), (-step, pa[1], pb[1], sc[1], sc[3])]
                gp = sign * (sc[0] + sc[2])
                gm = sign * (sc[1] + sc[3])
                curv = gp - 2.0 * g0 + gm
                if curv < 0.0:
                    th = step * (gm - gp) / (2.0 * curv)
                    th = min(max(th, -_HALF_PI), _HALF_PI)
                    if abs(abs(th) - step) > 1e-3 * step and th != 0.0:
                        na, nb = _rotate(xa, xb, th, e)
                        s2 = member_scores(np.stack([na, nb]), d_a, d_b)
                        cand.append((th, na, nb, s2[0], s2[1]))
                best, best_gain = None, 1e-15
                for th, na, nb, sa, sb in cand:
                    gain = sign * (sa + sb) - g0
                    if gain > best_gain:
                        best, best_gain = (na, nb, sa, sb), gain
                if best is not None:
                    members[a], members[b], scores[a], scores[b] = best
                    accepted += 1
    return accepted


def bound_batch(p, q):
    """Closed-form distributed-negativity bound for each row pair of *p*, *q*.

    ``2/(d-1) * sum_k sum_{j<j'} sqrt(p_j p_j') sqrt(q_{j+k} q_{j'+k})``.
    """
    sp = np.sqrt(np.atleast_2d(np.asarray(p, dtype=float)))
    sq = np.sqrt(np.atleast_2d(np.asarray(q, dtype=float)))
    n, d = sp.shape
    out = np.zeros(n)
    for k in range(d):
        a = sp * np.roll(sq, -k, axis=1)
        out += 0.5 * (a.sum(axis=1) ** 2 - (a * a).sum(axis=1))
    return 2.0 * out / (d - 1)
