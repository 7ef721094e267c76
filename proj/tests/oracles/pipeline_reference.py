"""Independent numpy reference of the sampling + whitened-Jennrich pipeline.

Used to calibrate acceptance tolerances before the C++ build; not part of the
library. Run: python3 tests/oracles/pipeline_reference.py [demo|gmm|sweep]
"""
import itertools
import sys

import numpy as np
from scipy.optimize import linear_sum_assignment


def random_instance(rng, d, k, delta):
    for _ in range(1000):
        p1 = rng.uniform(-1, 1, d)
        u = rng.normal(size=d)
        u /= np.linalg.norm(u)
        p2 = p1 + delta * u
        if np.any(np.abs(p2) > 1):
            continue
        pts = [p1, p2]
        tries = 0
        while len(pts) < k and tries < 100000:
            tries += 1
            c = rng.uniform(-1, 1, d)
            if min(np.linalg.norm(c - p) for p in pts) >= delta:
                pts.append(c)
        if len(pts) == k:
            mu = np.array(pts)
            return mu[rng.permutation(k)]
    raise RuntimeError("infeasible")


def f_eval(mu, w, S):
    return np.exp(1j * np.pi * S @ mu.T) @ w


def recover(fn, d, k, R, m, rng):
    S = rng.normal(scale=R, size=(m, d))
    Sp = np.vstack([S, np.eye(d), np.zeros((1, d))])
    v = rng.normal(size=d)
    v /= np.linalg.norm(v)
    mp = m + d + 1
    F = np.empty((mp, mp, 2), complex)
    for n3, vv in enumerate([v, 2 * v]):
        pts = (Sp[:, None, :] + Sp[None, :, :] + vv).reshape(-1, d)
        F[:, :, n3] = fn(pts).reshape(mp, mp)
    P, lam, _ = np.linalg.svd(F[:, :, 0])
    P = P[:, :k]
    E1 = P.conj().T @ F[:, :, 0] @ P.conj()
    E2 = P.conj().T @ F[:, :, 1] @ P.conj()
    M = np.linalg.solve(E2.T, E1.T).T
    ev, U = np.linalg.eig(M)
    V = P @ U
    V = V / V[-1, :]
    mu_hat = np.angle(V[m:m + d, :]).T / np.pi
    return mu_hat


def sum_err(mu, mu_hat):
    C = np.linalg.norm(mu[:, None, :] - mu_hat[None, :, :], axis=2)
    r, c = linear_sum_assignment(C)
    return C[r, c].sum(), C[r, c].max()


def noisy(mu, w, eps, rng):
    def fn(pts):
        clean = f_eval(mu, w, pts)
        r = eps * np.sqrt(rng.uniform(size=len(pts)))
        th = rng.uniform(0, 2 * np.pi, len(pts))
        return clean + r * np.exp(1j * th)
    return fn


def demo(seeds=20):
    ok = 0
    for seed in range(seeds):
        rng = np.random.default_rng(seed)
        mu = random_instance(rng, 2, 8, 0.05)
        w = np.minimum(rng.uniform(0.1, 1.1, 8), 1.0)
        mh = recover(noisy(mu, w, 0.1, rng), 2, 8, 200.0, 30, rng)
        s, _ = sum_err(mu, mh)
        ok += s <= 0.1
        print(seed, s)
    print("demo success", ok / seeds)


def sweep():
    for delta, R in [(0.1, 25.0), (0.005, 1.0)]:
        ok = 0
        for t in range(20):
            rng = np.random.default_rng(1000 + t)
            mu = random_instance(rng, 4, 8, delta)
            w = np.minimum(rng.uniform(0.1, 1.1, 8), 1.0)
            try:
                mh = recover(noisy(mu, w, 0.02, rng), 4, 8, R, 64, rng)
                ok += sum_err(mu, mh)[0] <= 0.1
            except np.linalg.LinAlgError:
                pass
        print("cutoff", delta, R, ok / 20)
    for delta in [0.01, 0.05, 0.2]:
        row = []
        for m in [4, 8, 16, 32, 64]:
            ok = 0
            for t in range(10):
                rng = np.random.default_rng(2000 + t)
                mu = random_instance(rng, 4, 8, delta)
                w = np.minimum(rng.uniform(0.1, 1.1, 8), 1.0)
                mh = recover(noisy(mu, w, 0.03, rng), 4, 8, 0.26 / delta, m, rng)
                ok += sum_err(mu, mh)[0] <= 0.1
            row.append(ok / 10)
        print("meas", delta, row)


def gmm(seeds=20, N=100000, sigma=0.01):
    k, d = 2, 2
    good = 0
    for seed in range(seeds):
        rng = np.random.default_rng(seed)
        mu = random_instance(rng, d, k, 0.5)
        w = np.array([0.5, 0.5])
        comp = rng.choice(k, size=N, p=w)
        X = mu[comp] + sigma * rng.normal(size=(N, d))

        def fn(pts):
            cf = np.concatenate([np.exp(1j * np.pi * (pts[i:i + 64] @ X.T)).mean(axis=1)
                                 for i in range(0, len(pts), 64)])
            return np.exp(0.5 * np.pi**2 * sigma**2 * (pts**2).sum(1)) * cf

        eps_x = 0.25
        R = np.sqrt(2 * np.log(k / eps_x)) / (np.pi * 0.5)
        m = int(np.ceil(k / eps_x * np.sqrt(8 * np.log(k / 0.1))))
        mh = recover(fn, d, k, R, m, rng)
        C = np.abs(mu[:, None, :] - mh[None, :, :]).max(axis=2)
        r, c = linear_sum_assignment(C)
        e = C[r, c].max()
        good += e <= 0.02
        print(seed, e, flush=True)
    print("gmm success", good / seeds)


if __name__ == "__main__":
    {"demo": demo, "gmm": gmm, "sweep": sweep}[sys.argv[1] if len(sys.argv) > 1 else "demo"]()
