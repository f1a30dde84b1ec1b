#!/usr/bin/env python3
"""Tabulate the curvature-condition factor polynomials over a range of n.

For each half-rank n the residual of every curvature condition on the
generic structure factors as scale * p(mu) * shape; this prints p, the
scale, the rational mu roots, and the (lambda, mu) pairs they induce
through lambda = 2n - mu.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from parakenmotsu.soliton import (
    ConditionKind,
    phi_ricci_prefactor,
    rational_roots,
    symbolic_factor_check,
    theorem_expected,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--max-n",
        type=int,
        default=5,
        help="largest half-rank to tabulate (default: 5)",
    )
    args = parser.parse_args(argv)
    if args.max_n < 1:
        print("--max-n must be at least 1", file=sys.stderr)
        return 2

    for n in range(1, args.max_n + 1):
        print(f"n = {n}  (dimension {2 * n + 1})")
        for kind in ConditionKind:
            result = symbolic_factor_check(kind, n)
            roots = sorted(rational_roots(result.polynomial))
            pairs = sorted(theorem_expected(kind, n))
            root_text = ", ".join(str(r) for r in roots)
            pair_text = ", ".join(f"({a}, {b})" for a, b in pairs)
            print(
                f"  {kind.value:<5} polynomial {str(result.polynomial):<22}"
                f" scale {str(result.scale):<5} mu roots {root_text:<6}"
                f" pairs {pair_text}"
            )
        prefactor = phi_ricci_prefactor(n)
        print(
            f"  phi-Ricci prefactor: polynomial {prefactor.polynomial}"
            f"  scale {prefactor.scale}"
        )
    return 0


if __name__ == "__main__":
    import os

    try:
        sys.exit(main())
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        sys.exit(1)
