#!/usr/bin/env python3
"""Module definition for swimtrack"""
from .codetools import *  # NOQA
