#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .exceptions import *
from .utils import *
from .filters import *
from .nets import *
from .spaces import *
from .constructions import *
from .function_space import *
from .compactness import *
from .search import *
from .io import *
from .fixtures import *

__version__ = "0.1"
