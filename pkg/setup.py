# The license is declared here rather than in pyproject.toml until SPDX expressions are accepted by every supported setuptools.

import setuptools

setuptools.setup(
    license = "BSD-2-Clause",
)
