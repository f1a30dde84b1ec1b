#!/usr/bin/env python3
"""Run the full verification suite over a set of manifold documents.

With no arguments, verifies every .pk file under manifolds/.  Exits
nonzero if any selected check fails on any document.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from parakenmotsu.dsl import DocumentError, load_manifold
from parakenmotsu.report import emit_report, exit_code
from parakenmotsu.suite import run_suite

DEFAULT_DIR = Path(__file__).parent.parent / "manifolds"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "files",
        nargs="*",
        type=Path,
        help="manifold documents (default: manifolds/*.pk)",
    )
    parser.add_argument(
        "--format",
        choices=("text", "json-like"),
        default="text",
        help="report format (default: text)",
    )
    args = parser.parse_args(argv)

    files = args.files or sorted(DEFAULT_DIR.glob("*.pk"))
    if not files:
        print("no manifold documents found", file=sys.stderr)
        return 2

    worst = 0
    for path in files:
        try:
            result = run_suite(load_manifold(path))
        except (DocumentError, OSError) as err:
            print(f"{path}: error: {err}", file=sys.stderr)
            worst = max(worst, 2)
            continue
        sys.stdout.buffer.write(emit_report(result, args.format))
        sys.stdout.buffer.flush()
        worst = max(worst, exit_code(result.checks))
    return worst


if __name__ == "__main__":
    import os

    try:
        sys.exit(main())
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        sys.exit(1)
