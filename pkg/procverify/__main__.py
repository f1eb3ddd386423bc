"""Allow `python -m procverify`."""
from .cli import main

raise SystemExit(main())
