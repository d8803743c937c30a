"""Build script: compiles the oscillatory-sum hot kernel as a C extension.

The package works without the extension (a vectorised NumPy fallback is
selected at import time), so any failure here degrades to a pure-Python
install instead of aborting.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("platelab._core._oscsum_cy",
                   ["src/platelab/_core/_oscsum_cy.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    for mod in ext_modules:
        mod.include_dirs.append(np.get_include())
        mod.extra_compile_args.append("-O3")
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"platelab: building without compiled core ({exc})", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
