"""JIT-compiled inner loop of the projected Adam optimizer.

The loop is hot (permutation calibration reruns it B+1 times per test),
so it is compiled with numba.  The gradient formulas here mirror
ridge.grad_objective exactly; tests assert the two paths agree.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_DONE = 0
STATUS_ZERO_DISC = 1

SEMINORM_FLOOR = 1e-12


@njit(cache=True, nogil=True, inline="always")
def _ppow(u, k):
    # u > 0 is guaranteed by callers; integer k >= 0
    if k == 0:
        return 1.0
    if k == 1:
        return u
    if k == 2:
        return u * u
    if k == 3:
        return u * u * u
    return u**k


@njit(cache=True, nogil=True)
def adam_run(
    Z,
    s,
    k,
    lr,
    beta1,
    beta2,
    eps,
    lam,
    log_obj,
    a,
    w,
    b,
    ma,
    va,
    mw,
    vw,
    mb,
    vb,
    values,
    best_a,
    best_w,
    best_b,
    t_start,
    T,
    best_mmd,
    best_t,
):
    """Run projected Adam from iterate t_start up to iterate T.

    Z is the pooled (M, d) data, s the signed weights (+1/m on x rows,
    -1/n on y rows).  Parameter, moment, and best-iterate arrays are
    updated in place; values[t] records the unit-ball MMD of iterate t,
    for t = 0 (the initialization) through T.  Returns a tuple
    (status, t, best_mmd, best_t); STATUS_ZERO_DISC means the log
    objective hit an exactly-zero discrepancy at iterate t, and the
    caller must perturb the parameters and re-enter with t_start = t.
    """
    M, d = Z.shape
    N = a.shape[0]
    da = np.empty(N)
    dw = np.empty((N, d))
    db = np.empty(N)
    wn = np.empty(N)

    for t in range(t_start, T + 1):
        # forward pass and discrepancy gradient at the current iterate;
        # the two blocks accumulate separately so that bitwise-identical
        # samples cancel to an exact zero
        Dx = 0.0
        Dy = 0.0
        for j in range(N):
            da[j] = 0.0
            db[j] = 0.0
            for q in range(d):
                dw[j, q] = 0.0
        for i in range(M):
            si = s[i]
            for j in range(N):
                u = -b[j]
                for q in range(d):
                    u += w[j, q] * Z[i, q]
                if u > 0.0:
                    pk = _ppow(u, k)
                    if si > 0.0:
                        Dx += si * a[j] * pk
                    else:
                        Dy += (-si) * a[j] * pk
                    da[j] += si * pk
                    c = si * a[j] * k * _ppow(u, k - 1)
                    for q in range(d):
                        dw[j, q] += c * Z[i, q]
                    db[j] -= c
        D = Dx - Dy

        sn = 0.0
        for j in range(N):
            acc = 0.0
            for q in range(d):
                acc += w[j, q] * w[j, q]
            wn[j] = np.sqrt(acc)
            if wn[j] > 0.0:
                sn += abs(a[j]) * _ppow(wn[j], k)

        mmd = abs(D) / sn if sn >= SEMINORM_FLOOR else 0.0
        values[t] = mmd
        if mmd > best_mmd:
            best_mmd = mmd
            best_t = t
            for j in range(N):
                best_a[j] = a[j]
                best_b[j] = b[j]
                for q in range(d):
                    best_w[j, q] = w[j, q]

        if t == T:
            break
        if log_obj and D == 0.0:
            return STATUS_ZERO_DISC, t, best_mmd, best_t

        if log_obj:
            cD = -1.0 / (k * D)
            cP = lam / (k * N)
        else:
            sgn = 1.0 if D > 0.0 else (-1.0 if D < 0.0 else 0.0)
            cD = -sgn / (k * N)
            cP = 2.0 * lam * sn / (k * N * N)

        step = t + 1
        bc1 = 1.0 - beta1**step
        bc2 = 1.0 - beta2**step
        for j in range(N):
            sa = 1.0 if a[j] > 0.0 else (-1.0 if a[j] < 0.0 else 0.0)
            wnk = _ppow(wn[j], k) if wn[j] > 0.0 else 0.0
            ga = cD * da[j] + cP * sa * wnk
            if wn[j] > 0.0:
                if k == 1:
                    wpow = 1.0 / wn[j]
                elif k == 2:
                    wpow = 1.0
                elif k == 3:
                    wpow = wn[j]
                else:
                    wpow = wn[j] ** (k - 2)
                wfac = cP * abs(a[j]) * k * wpow
            else:
                wfac = 0.0
            gb = cD * db[j]

            ma[j] = beta1 * ma[j] + (1.0 - beta1) * ga
            va[j] = beta2 * va[j] + (1.0 - beta2) * ga * ga
            mb[j] = beta1 * mb[j] + (1.0 - beta1) * gb
            vb[j] = beta2 * vb[j] + (1.0 - beta2) * gb * gb
            for q in range(d):
                gw = cD * dw[j, q] + wfac * w[j, q]
                mw[j, q] = beta1 * mw[j, q] + (1.0 - beta1) * gw
                vw[j, q] = beta2 * vw[j, q] + (1.0 - beta2) * gw * gw

        # apply the updates after all gradients are formed
        for j in range(N):
            a[j] -= lr * (ma[j] / bc1) / (np.sqrt(va[j] / bc2) + eps)
            b[j] -= lr * (mb[j] / bc1) / (np.sqrt(vb[j] / bc2) + eps)
            if b[j] < 0.0:
                b[j] = 0.0
            for q in range(d):
                w[j, q] -= lr * (mw[j, q] / bc1) / (np.sqrt(vw[j, q] / bc2) + eps)

    return STATUS_DONE, T, best_mmd, best_t
