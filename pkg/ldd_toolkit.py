#!/usr/bin/env python3
"""
LDD Challenge-Set Toolkit
Command-line entry point; see `python ldd_toolkit.py --help`.
"""

import sys

from dotenv import load_dotenv

# Load environment variables (LDD_OUTPUT_DIR)
load_dotenv()

from src.cli_report import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
