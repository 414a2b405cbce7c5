#!/usr/bin/env python3
"""Regenerates the chain fixtures under fixtures/."""
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def dyadic_z(depth=14):
    return {
        "backend": "zd",
        "depth": depth,
        "side": "right",
        "zd": {"d": 1, "moduli": [[2 ** n] for n in range(1, depth + 1)]},
    }


def z2_quartic(depth=7):
    return {
        "backend": "zd",
        "depth": depth,
        "side": "right",
        "zd": {"d": 2, "moduli": [[2 ** n, 2 ** n] for n in range(1, depth + 1)]},
    }


def dihedral(m):
    """Dihedral group of order 2m: element (i, f) with id i + m*f."""
    size = 2 * m

    def eid(i, f):
        return i % m + m * f

    mul = [[0] * size for _ in range(size)]
    for i in range(m):
        for f in range(2):
            for j in range(m):
                for g in range(2):
                    k = (i + (m - j if f else j)) % m
                    mul[eid(i, f)][eid(j, g)] = eid(k, f ^ g)
    # a -> reflection s = (0,1), b -> rotation r = (1,0)
    gen_images = [eid(0, 1), eid(1, 0)]
    return {"size": size, "mul": mul, "gen_images": gen_images}


def dihedral_chain(ms=(3, 6, 12, 24, 48)):
    quotients = [dihedral(m) for m in ms]
    projections = []
    for lo, hi in zip(ms, ms[1:]):
        proj = [0] * (2 * hi)
        for i in range(hi):
            for f in range(2):
                proj[i + hi * f] = (i % lo) + lo * f
        projections.append(proj)
    return {
        "backend": "table",
        "depth": len(ms),
        "side": "right",
        "table": {"quotients": quotients, "projections": projections},
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    fixtures = {
        "dyadic_z.json": dyadic_z(),
        "z2_quartic.json": z2_quartic(),
        "table_dihedral.json": dihedral_chain(),
    }
    for name, data in fixtures.items():
        path = os.path.join(OUT, name)
        with open(path, "w") as f:
            json.dump(data, f, separators=(",", ":"), sort_keys=True)
            f.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
