from __future__ import annotations

import sys

if __name__ == "__main__":
    from lindcert.cli import main

    raise SystemExit(main(sys.argv[1:]))
