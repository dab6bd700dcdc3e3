"""Time a fixed residue workload under the gmpy2 and pure-Python coefficient backends.

    python benchmarks/bench_backends.py [--repeat 3]

Each backend runs in a fresh interpreter because the choice is made at import.
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from derham._coeff import BACKEND
from derham.certificate import certify_smooth
from derham.forms import residues, spanning_set
from derham.lift import build_psi
from derham.polyring import Hypersurface

cases = [("x*y^2 - x - 1", 1), ("x^3 + y^3 - 3*x*y + 2*x - 1", 1), ("x^4 - x^2*y + y^3 - y", 1)]
timings = {}
for text, p in cases:
    start = time.perf_counter()
    hs = Hypersurface.parse(text, 2)
    psi = build_psi(hs, certify_smooth(hs), p + 1)
    residues(hs, psi, spanning_set(hs, p))
    timings[text] = time.perf_counter() - start
print(json.dumps({"backend": BACKEND, "timings": timings}))
"""


def run(pure: bool) -> dict:
    env = dict(os.environ)
    env.pop("DERHAM_PURE_PYTHON", None)
    if pure:
        env["DERHAM_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    best: dict = {}
    for pure in (False, True):
        for _ in range(args.repeat):
            res = run(pure)
            row = best.setdefault(res["backend"], {})
            for case, t in res["timings"].items():
                row[case] = min(t, row.get(case, float("inf")))
    cases = list(next(iter(best.values())))
    width = max(map(len, cases))
    print(f"{'hypersurface':<{width}}  " + "  ".join(f"{b:>10}" for b in best))
    for case in cases:
        print(f"{case:<{width}}  " + "  ".join(f"{best[b][case]:>9.3f}s" for b in best))


if __name__ == "__main__":
    main()
