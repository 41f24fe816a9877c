import os
import os.path
import collections.abc as abc_types
import json, re
from os import path
from os import path as osp, sep
from os.path import (join, split,
                     basename)
from math import *
from . import sibling
from .. import parent_mod
from .relative import thing
from ...deep.pkg import leaf
