"""Regenerates the frozen PPT-entangled fixtures under tests/fixtures.

Needs numpy and cvxpy. Two searches, both over the pbar tensor T of a
three-qudit DS state (T[i,j,k] = p_K / C(3,K), K the type of ijk):

  lifted   d = 5. Minimizes <D H D, sum_i T[i]> over states whose slices T[i]
           are PSD (exactly the 1:2 PPT condition), with H the Horn matrix and
           the diagonal D found by random search plus local moves in log
           space. A negative value certifies that the two-party marginal
           block is not completely positive.
  motzkin  d = 3. Minimizes T_210 + T_120 + T_003 - 3 T_111 under the same
           constraints. The form u^2 v + u v^2 + w^3 - 3uvw is nonnegative
           on the orthant, so a negative value rules out any mixture of
           symmetric product states.

Each optimum sits on the PPT boundary; it is mixed with the uniform mixture of
Dicke states, rounded to 12 digits and written as a state file.

  python3 search.py lifted  [--trials 150 --moves 150]
  python3 search.py motzkin
  python3 search.py freeze-lifted T.npy logD.npy EPS OUT.json
  python3 search.py freeze-motzkin T.npy EPS OUT.json
"""
import itertools
import json
import math
import sys

import numpy as np

HORN = np.array([[1, -1, 1, 1, -1], [-1, 1, -1, 1, 1], [1, -1, 1, -1, 1],
                 [1, 1, -1, 1, -1], [-1, 1, 1, -1, 1]], float)


def partitions(n, d):
    out = [k for k in itertools.product(range(n + 1), repeat=d) if sum(k) == n]
    out.sort(reverse=True)
    return out


def mult(k):
    r = math.factorial(sum(k))
    for c in k:
        r //= math.factorial(c)
    return r


def key(d, *levels):
    k = [0] * d
    for a in levels:
        k[a] += 1
    return tuple(k)


def slices(d, tbar):
    return [np.array([[tbar[key(d, i, j, k)] for k in range(d)] for j in range(d)])
            for i in range(d)]


def sdp_setup(d):
    import cvxpy as cp
    parts = partitions(3, d)
    v = {k: cp.Variable(nonneg=True) for k in parts}
    sl = [cp.bmat([[v[key(d, i, j, k)] for k in range(d)] for j in range(d)])
          for i in range(d)]
    cons = [s >> 0 for s in sl] + [sum(mult(k) * v[k] for k in parts) == 1]
    return cp, parts, v, sl, cons


def search_lifted(trials, moves):
    d = 5
    cp, parts, v, sl, cons = sdp_setup(d)
    wpar = cp.Parameter((d, d))
    prob = cp.Problem(cp.Minimize(cp.sum(cp.multiply(wpar, sum(sl)))), cons)
    rng = np.random.default_rng(0)

    def value(logd):
        dm = np.diag(np.exp(logd))
        w = dm @ HORN @ dm
        wpar.value = w / np.abs(w).max()
        prob.solve()
        return prob.value

    best, g = 1.0, None
    for t in range(trials):
        cand = rng.normal(0, 1.5, d)
        val = value(cand)
        if val < best:
            best, g = val, cand
    step = 0.3
    for it in range(moves):
        cand = g + rng.normal(0, step, d)
        val = value(cand)
        if val < best:
            best, g = val, cand
        if it % 50 == 49:
            step /= 2
    value(g)
    np.save('T.npy', np.array([v[k].value for k in parts]))
    np.save('logD.npy', g)
    print('best', best)


def search_motzkin():
    d = 3
    cp, parts, v, sl, cons = sdp_setup(d)
    obj = v[(2, 1, 0)] + v[(1, 2, 0)] + v[(0, 0, 3)] - 3 * v[(1, 1, 1)]
    prob = cp.Problem(cp.Minimize(obj), cons)
    prob.solve()
    np.save('T.npy', np.array([v[k].value for k in parts]))
    print('best', prob.value)


def freeze(d, tvec, eps, out):
    parts = partitions(3, d)
    u = 1.0 / len(parts)
    p = {k: round(mult(k) * ((1 - eps) * t + eps * u / mult(k)), 12)
         for k, t in zip(parts, tvec)}
    total = sum(p.values())
    tbar = {k: p[k] / mult(k) / total for k in parts}
    sl = slices(d, tbar)
    print('min slice eigenvalue', min(np.linalg.eigvalsh(s).min() for s in sl))
    doc = {"n_parties": 3, "local_dim": d,
           "probs": {",".join(map(str, k)): p[k] for k in parts}}
    with open(out, 'w') as f:
        json.dump(doc, f, indent=2)
        f.write('\n')
    return tbar, sl


def main():
    cmd = sys.argv[1]
    if cmd == 'lifted':
        trials = int(sys.argv[sys.argv.index('--trials') + 1]) if '--trials' in sys.argv else 150
        moves = int(sys.argv[sys.argv.index('--moves') + 1]) if '--moves' in sys.argv else 150
        search_lifted(trials, moves)
    elif cmd == 'motzkin':
        search_motzkin()
    elif cmd == 'freeze-lifted':
        tvec, logd, eps, out = np.load(sys.argv[2]), np.load(sys.argv[3]), float(sys.argv[4]), sys.argv[5]
        tbar, sl = freeze(5, tvec, eps, out)
        m = sum(sl)
        dm = np.diag(np.exp(logd))
        w = dm @ HORN @ dm
        w /= np.abs(w).max()
        print('marginal min entry', m.min(), 'min eigenvalue', np.linalg.eigvalsh(m).min())
        print('<W, M>', (w * m).sum())
    elif cmd == 'freeze-motzkin':
        tvec, eps, out = np.load(sys.argv[2]), float(sys.argv[3]), sys.argv[4]
        tbar, _ = freeze(3, tvec, eps, out)
        print('L', tbar[(2, 1, 0)] + tbar[(1, 2, 0)] + tbar[(0, 0, 3)] - 3 * tbar[(1, 1, 1)])
    else:
        raise SystemExit(__doc__)


if __name__ == '__main__':
    main()
