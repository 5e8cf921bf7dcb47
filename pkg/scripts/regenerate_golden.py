"""Rewrite tests/golden/*.txt from the CLI cases in tests/test_cli.py.

Run after an intentional change to numerical output, then review the diff.
"""
import io
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from test_cli import CASES, GOLDEN  # noqa: E402

from halffourier.cli import run  # noqa: E402


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in sorted(CASES.items()):
        out = io.StringIO()
        code = run(argv, stdout=out, stderr=io.StringIO())
        if code != 0:
            raise SystemExit(f"{name}: exit status {code}")
        (GOLDEN / f"{name}.txt").write_text(out.getvalue())
        print(f"wrote {name}.txt")


if __name__ == "__main__":
    main()
