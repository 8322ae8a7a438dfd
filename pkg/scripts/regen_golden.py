"""Regenerate tests/fixtures/cli/*.out from the current CLI.

Run after an intentional output change, then review the diff:

    python3 scripts/regen_golden.py && git diff tests/fixtures/cli
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from cli_fixtures import cases, load, run_in_process  # noqa: E402


def main() -> int:
    for path in cases():
        case = load(path)
        status, out = run_in_process(case)
        if status != case.get("exit", 0):
            print(f"{path.name}: exit {status}, fixture says {case.get('exit', 0)}", file=sys.stderr)
            return 1
        path.with_suffix(".out").write_text(out)
        print(f"{path.stem}: {len(out)} bytes")
    return 0


if __name__ == "__main__":
    sys.exit(main())
