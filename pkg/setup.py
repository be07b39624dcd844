#!/usr/bin/env python
import os

from setuptools import setup

# define scripts
scripts = ["bin/entroute"]

# find all sub-packages
modules = []
setup_dir = os.path.dirname(os.path.realpath(__file__))
for root, dirs, files in os.walk(setup_dir):
    submod = os.path.relpath(root, setup_dir).replace(os.sep, ".")
    if not submod.startswith("entroute"):
        continue
    if "__init__.py" in files:
        modules.append(submod)

setup(
    name="entroute",
    description="opportunistic entanglement routing simulator",
    long_description="Waiting times and rates of opportunistic entanglement \
        routing on line networks and a slotted routing simulator comparing \
        non-opportunistic and k-opportunistic forwarding on grids.",
    include_package_data=True,
    packages=list(map(str, modules)),
    package_data={"entroute": ["config/*.cfg", "config/README.txt",
                               "config/experiments/*.cfg"]},
    scripts=scripts,
)
