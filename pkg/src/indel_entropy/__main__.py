"""Entry point for python -m indel_entropy."""

from .cli import main

if __name__ == "__main__":
    main()
