"""Run the acceptance criteria outside pytest and print one line per criterion."""
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

import test_acceptance  # noqa: E402

if __name__ == "__main__":
    sys.exit(test_acceptance.main())
