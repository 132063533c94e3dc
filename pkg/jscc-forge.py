#!/usr/bin/python3
"""
jscc-forge - Entry Point

Thin wrapper script for the source-channel rate toolkit.
"""

import os
import sys

# Add the src directory to Python path so we can import jscc_forge
script_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.join(script_dir, "src")
if src_dir not in sys.path:
    sys.path.insert(0, src_dir)

from jscc_forge.app import _main_impl


def main() -> int:
    """Entry point for the jscc-forge application."""
    return _main_impl()


if __name__ == "__main__":
    sys.exit(main())
