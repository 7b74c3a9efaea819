"""Setup shim for tools that still invoke setup.py directly."""

from setuptools import setup

setup()
