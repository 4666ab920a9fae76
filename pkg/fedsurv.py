"""Main script that runs fedsurv commands depending on parameters"""
import sys

from fedsurv.cli import main


if __name__ == "__main__":
    sys.exit(main())
