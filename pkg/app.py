import sys

from dotenv import load_dotenv

from src.ui.cli import main

# Configuration
load_dotenv()

if __name__ == "__main__":
    sys.exit(main())
