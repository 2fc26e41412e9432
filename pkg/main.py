"""
gradcode

Command line entry for building, decoding, verifying and simulating
gradient codes with partial recovery. Same as the `gradcode` console script.
"""
import sys
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

try:
    from gradcode.cli import main
except ImportError:
    # Support running from a checkout without installing
    ROOT = Path(__file__).resolve().parent
    if str(ROOT) not in sys.path:
        sys.path.insert(0, str(ROOT))
    from gradcode.cli import main  # type: ignore


if __name__ == "__main__":
    sys.exit(main())
