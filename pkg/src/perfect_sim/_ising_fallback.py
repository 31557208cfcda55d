"""Pure-Python heat-bath kernels; same contract and output as the compiled ones."""


def _pick(u, n):
    v = int(u * n)
    return n - 1 if v >= n else v


def heatbath_apply(spins, nbr_ptr, nbr_idx, prob_plus, max_deg, block):
    n = len(spins)
    ptr = nbr_ptr.tolist()
    idx = nbr_idx.tolist()
    pp = prob_plus.tolist()
    us = block.tolist()
    x = spins.tolist()
    for k in range(0, 2 * (len(us) // 2), 2):
        v = _pick(us[k], n)
        s = 0
        for j in range(ptr[v], ptr[v + 1]):
            s += x[idx[j]]
        x[v] = 1 if us[k + 1] < pp[s + max_deg] else -1
    spins[:] = x


def heatbath_apply_pair(lo, hi, nbr_ptr, nbr_idx, prob_plus, max_deg, block):
    n = len(lo)
    ptr = nbr_ptr.tolist()
    idx = nbr_idx.tolist()
    pp = prob_plus.tolist()
    us = block.tolist()
    a = lo.tolist()
    b = hi.tolist()
    bad = -1
    for k in range(len(us) // 2):
        v = _pick(us[2 * k], n)
        thr = us[2 * k + 1]
        s_lo = 0
        s_hi = 0
        for j in range(ptr[v], ptr[v + 1]):
            w = idx[j]
            s_lo += a[w]
            s_hi += b[w]
        a[v] = 1 if thr < pp[s_lo + max_deg] else -1
        b[v] = 1 if thr < pp[s_hi + max_deg] else -1
        if a[v] > b[v]:
            bad = k
            break
    lo[:] = a
    hi[:] = b
    return bad
