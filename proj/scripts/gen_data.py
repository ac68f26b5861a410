#!/usr/bin/env python3
"""Generate the frozen data files: newform coefficients and group configs.

Newform: the unique weight-2 newform on Gamma0(11), q-expansion of
eta(z)^2 eta(11z)^2.  Group configs: generators found by the Schreier
method on the coset action of SL2(Z) on P^1(Z/N).
"""
import json, sys
from fractions import Fraction

def eta_product_coeffs(nmax):
    # q * prod (1-q^n)^2 (1-q^(11n))^2, exact integer arithmetic
    P = [0] * (nmax + 1)
    P[0] = 1
    def mul_factor(P, k):
        # multiply by (1 - q^k)^2 = 1 - 2 q^k + q^{2k}
        Q = P[:]
        for i in range(len(P)):
            if P[i] == 0: continue
            if i + k <= nmax: Q[i + k] -= 2 * P[i]
            if i + 2 * k <= nmax: Q[i + 2 * k] += P[i]
        return Q
    for k in range(1, nmax + 1):
        P = mul_factor(P, k)
        if 11 * k <= nmax:
            P = mul_factor(P, 11 * k)
    # a(n) = coefficient of q^n in q*P => a(n) = P[n-1]
    return {n: P[n - 1] for n in range(1, nmax + 1)}

def write_newform(path, nmax):
    a = eta_product_coeffs(nmax)
    assert a[1] == 1 and a[2] == -2 and a[3] == -1 and a[4] == 2 and a[5] == 1
    assert a[11] == 1 and a[7] == -2
    # Hecke multiplicativity spot checks
    for (m, n) in [(2, 3), (3, 5), (2, 7), (3, 7), (5, 7)]:
        assert a[m * n] == a[m] * a[n], (m, n)
    for p in [2, 3, 5, 7]:
        assert a[p * p] == a[p] * a[p] - p * a[1]
    with open(path, "w") as f:
        f.write(f"# level=11 weight=2 label=11.2.a.a count={nmax}\n")
        for n in range(1, nmax + 1):
            f.write(f"{n} {a[n]}\n")
    print(f"wrote {path} ({nmax} coefficients)")

# ---- group data ----

def mat_mul(A, B):
    return ((A[0][0]*B[0][0]+A[0][1]*B[1][0], A[0][0]*B[0][1]+A[0][1]*B[1][1]),
            (A[1][0]*B[0][0]+A[1][1]*B[1][0], A[1][0]*B[0][1]+A[1][1]*B[1][1]))

def mat_inv(A):
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))

def canon(A):
    (a, b), (c, d) = A
    if c < 0 or (c == 0 and d < 0):
        return ((-a, -b), (-c, -d))
    return A

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))

def cusp_class(A, N):
    # right coset Gamma0(N) A  <->  bottom row (c:d) in P^1(Z/N)
    (a, b), (c, d) = A
    return proj_class(c % N, d % N, N)

def proj_class(c, d, N):
    # canonical representative of (c:d) in P^1(Z/N)
    best = None
    for u in range(1, N):
        from math import gcd
        if gcd(u, N) != 1: continue
        cc, dd = (u * c) % N, (u * d) % N
        if best is None or (cc, dd) < best:
            best = (cc, dd)
    return best

def schreier_generators(N):
    # coset reps of Gamma0(N)\SL2(Z); BFS over right mult by S, T
    from math import gcd
    I = ((1, 0), (0, 1))
    reps = {proj_class(0, 1, N): I}
    order = [proj_class(0, 1, N)]
    queue = [I]
    while queue:
        U = queue.pop(0)
        for g in (S, T, mat_inv(T)):
            V = mat_mul(U, g)
            key = proj_class(V[1][0] % N, V[1][1] % N, N)
            if key not in reps:
                reps[key] = V
                order.append(key)
                queue.append(V)
    gens = []
    seen = set()
    for key in order:
        U = reps[key]
        for g in (S, T):
            V = mat_mul(U, g)
            vkey = proj_class(V[1][0] % N, V[1][1] % N, N)
            W = canon(mat_mul(V, mat_inv(reps[vkey])))  # in Gamma0(N)
            assert W[1][0] % N == 0
            assert W[0][0]*W[1][1] - W[0][1]*W[1][0] == 1
            if W == ((1, 0), (0, 1)):
                continue
            k = W if W < mat_inv(canon(mat_inv(W))) else W  # dedupe below
            if W in seen or canon(mat_inv(W)) in seen:
                continue
            seen.add(W)
            gens.append(W)
    return gens, len(reps)

def write_group11(path):
    import math
    gens, index = schreier_generators(11)
    assert index == 12
    s = math.sqrt(11.0)
    cfg = {
        "level": 11,
        "genus": 1,
        "volume": 4 * math.pi,
        "cusps": [
            {"label": "inf", "representative": "inf",
             "scaling": [[1.0, 0.0], [0.0, 1.0]], "width": 1.0},
            {"label": "0", "representative": "0/1",
             "scaling": [[0.0, -1.0 / s], [s, 0.0]], "width": 11.0},
        ],
        "generators": [[[int(g[0][0]), int(g[0][1])], [int(g[1][0]), int(g[1][1])]] for g in gens],
    }
    with open(path, "w") as f:
        json.dump(cfg, f, indent=2)
        f.write("\n")
    print(f"wrote {path}: {len(gens)} generators, index {index}")
    for g in gens:
        print("   ", g)

def write_group1(path):
    import math
    cfg = {
        "level": 1,
        "genus": 0,
        "volume": math.pi / 3,
        "cusps": [
            {"label": "inf", "representative": "inf",
             "scaling": [[1.0, 0.0], [0.0, 1.0]], "width": 1.0},
        ],
        "generators": [[[0, -1], [1, 0]], [[1, 1], [0, 1]]],
    }
    with open(path, "w") as f:
        json.dump(cfg, f, indent=2)
        f.write("\n")
    print(f"wrote {path}")

if __name__ == "__main__":
    write_newform("/root/proj/data/newform_11_2.txt", 1000)
    write_group11("/root/proj/data/gamma0_11.json")
    write_group1("/root/proj/data/gamma0_1.json")
