"""Reproduce the thread-scaling comparison at desk scale.

Calibrates the Fibonacci dummy-task argument to roughly 100-300 ms,
then times sequential / all-parallel / pool-limited execution for
i = 1..i_max tasks and prints the CSV table.

Usage: python scripts/perf_experiment.py [i_max]
"""

import sys

from blockea.runner import calibrate_fib, hardware_concurrency, perf_experiment


def main() -> None:
    i_max = int(sys.argv[1]) if len(sys.argv) > 1 else 2 * hardware_concurrency()
    m = calibrate_fib()
    print(f"# cores={hardware_concurrency()} fib_arg={m}", file=sys.stderr)
    sys.stdout.write(perf_experiment(i_max, m))


if __name__ == "__main__":
    main()
