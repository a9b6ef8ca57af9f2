#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("foldcat")
except PackageNotFoundError:
    # source checkout, keep in sync with setup.cfg
    __version__ = "0.1.0"
