"""
Intermediate β-shift toolkit - command-line entry point

    python main.py classify --beta "(1+sqrt(5))/2" --alpha "1 - (1+sqrt(5))/4"
"""

import sys

from dotenv import load_dotenv

# Load environment variables (BETASHIFT_* settings) before the package reads them
load_dotenv()

from betashift.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
