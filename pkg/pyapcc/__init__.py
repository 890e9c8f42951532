# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
pyapcc __init__ module
"""
__version__ = '0.0.0'
__title__ = 'pyapcc'
__author__ = 'ragnarok team'
__author_email__ = 'laurent.woolcap@free.com'
__copyright__ = 'Copyright 2024 '
__license__ = 'MIT'
__url__ = ''
__description__ = 'Straggler-resilient, privacy-padded coded computing with hierarchical task partitioning.'
__long_description__ = '''This module encodes partitioned tasks on Chebyshev nodes, optimizes the task partition against
shifted-exponential worker delays and simulates the completion delay of coded computing strategies.'''

from .enums import *
from .errors import *
from .structs import *
