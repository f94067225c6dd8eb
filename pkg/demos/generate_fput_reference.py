"""Regenerate the frozen FPUT reference moments fixture.

Draws the documented 1e5-sample set from the published input distribution
with a fixed seed, evaluates the final-kinetic-energy QoI for every row
(in parallel; each evaluation is an independent ODE solve), and writes the
package fixture. Rerunning reproduces the shipped file byte for byte.
"""

import concurrent.futures
import os
import sys
import time

import numpy as np

from lassomc.estimators import mc_mean, mc_variance
from lassomc.problems import ReferenceMoments, fput_problem, write_reference_file
from lassomc.sampling import sample

SEED = 20260810
SAMPLES = 100_000


def _evaluate_chunk(args):
    start, rows = args
    problem = fput_problem()
    return start, problem(rows)


def main(out_path=None, samples=SAMPLES, workers=None):
    problem = fput_problem()
    if out_path is None:
        out_path = os.path.join(
            os.path.dirname(sys.modules["lassomc"].__file__),
            "_data",
            "fput_reference.txt",
        )
    workers = workers or os.cpu_count()
    inputs = sample(problem.distribution, samples, SEED).inputs
    chunks = [
        (start, inputs[start : start + 2000]) for start in range(0, samples, 2000)
    ]
    values = np.empty(samples)
    t0 = time.time()
    done = 0
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        for start, out in pool.map(_evaluate_chunk, chunks):
            values[start : start + len(out)] = out
            done += len(out)
            rate = done / (time.time() - t0)
            print(
                f"{done}/{samples} solves ({rate:.0f}/s, "
                f"eta {(samples - done) / rate / 60:.1f} min)",
                flush=True,
            )
    ref = ReferenceMoments(
        mean=mc_mean(values),
        variance=mc_variance(values),
        source="large-mc",
        seed=SEED,
        samples=samples,
    )
    problem_id = f"fput_p{problem.p}_t{problem.t_final:g}_sigma{problem.sigma:g}"
    write_reference_file(out_path, problem_id, ref)
    print(f"mean={ref.mean!r} variance={ref.variance!r}")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(
        out_path=sys.argv[1] if len(sys.argv) > 1 else None,
        samples=int(sys.argv[2]) if len(sys.argv) > 2 else SAMPLES,
    )
