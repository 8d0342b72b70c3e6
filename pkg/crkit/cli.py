"""
Console entry point: ``crkit <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 domain error (structured JSON on stderr).
"""
from __future__ import annotations

import json
import logging
import os
import sys
from typing import Optional, Sequence

logger = logging.getLogger("crkit.cli")


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    from django.core.management import call_command
    from django.core.management.base import CommandError

    from crkit.errors import CrkitError

    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        call_command("crkit", *argv, stdout=stdout, stderr=stderr)
    except CommandError as e:
        stderr.write(f"usage error: {e}\n")
        return 1
    except CrkitError as e:
        logger.warning("%s: %s", e.code, e.message)
        stderr.write(json.dumps(e.as_dict(), sort_keys=True) + "\n")
        return 2
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    import django

    django.setup()
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
