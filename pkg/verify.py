#!/usr/bin/env python
"""
Command-line entry point for procverify.

Usage:
    python verify.py <command> [options]

Examples:
    # Check the shipped ML development process
    python verify.py validate fixtures/ml_dev.proc

    # Check a recorded instance against it
    python verify.py check-trace fixtures/ml_dev.proc fixtures/happy_path.trace

    # Ask whether the factory quality seal can be reached within 20 steps
    python verify.py reach fixtures/ml_dev.proc --goal "done(factory_quality_seal)" --depth 20
"""
import sys

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from procverify.cli import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
