"""Compare the compiled (numba) and pure-numpy kernel backends on the
Monte-Carlo oracle, the hottest code path in the package.

Each backend runs in its own subprocess because the backend is chosen at
import time via UAML_BACKEND.

Usage: python3 benchmarks/backend_benchmark.py [n_samples]
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import textwrap

WORKLOAD = textwrap.dedent("""
    import json, time
    from uaml.backend import backend_name
    from uaml.bp import EvidenceSet
    from uaml.oracle import OracleConfig, oracle_infer
    from uaml.scenario import evidence_row, learn_scenario_network

    n_samples = int({n_samples})
    net = learn_scenario_network(seed=0, n_instantiations=100)
    ev = evidence_row(4)
    cfg = OracleConfig(n_samples=n_samples, seed=0, targets=("RA", "RB", "RC"))

    oracle_infer(net, ev, OracleConfig(n_samples=200, seed=0))  # warm up / compile
    t0 = time.perf_counter()
    result = oracle_infer(net, ev, cfg)
    elapsed = time.perf_counter() - t0
    print(json.dumps({{
        "backend": backend_name(),
        "n_samples": n_samples,
        "seconds": elapsed,
        "samples_per_second": n_samples / elapsed,
        "rb_uncertainty": result["RB"].uncertainty,
    }}))
""")


def run_backend(backend: str, n_samples: int) -> dict:
    env = dict(os.environ, UAML_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", WORKLOAD.format(n_samples=n_samples)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    n_samples = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
    results = [run_backend(b, n_samples) for b in ("numba", "numpy")]
    for r in results:
        print(f"{r['backend']:>6}: {r['seconds']:8.3f} s "
              f"({r['samples_per_second']:10.0f} samples/s)")
    if results[0]["rb_uncertainty"] != results[1]["rb_uncertainty"]:
        print("WARNING: backends disagree on the result")
        return 1
    speedup = results[1]["seconds"] / results[0]["seconds"]
    print(f"speedup (numba over numpy): {speedup:.1f}x, identical results")
    return 0


if __name__ == "__main__":
    sys.exit(main())
