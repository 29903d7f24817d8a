"""
Space files and the command line
================================

A space can be written to a plain text file, edited, and fed back to the
``jacobijets`` command.  Reports in machine format are deterministic, so an
exported space reproduces the built-in one byte for byte.
"""

import tempfile
from pathlib import Path

from jacobijets.cli import dump_space, load_space, main
from jacobijets.catalog import build

s = build("kaplan-n6")
text = dump_space(s)
print(text)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "n6.space"
    path.write_text(text)
    print("same constants:", load_space(path).alg.c == s.alg.c)

    main(["jacobi", str(path), "--scan", "3"])

    # break the Jacobi identity and see where it is reported
    path.write_text(text.replace("3 4 5 1\n", "3 4 5 1\n5 6 1 1\n", 1))
    print("exit code:", main(["validate", str(path)]))
