# Copyright 2026 The hierlab Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python front end for hierlab.

JSON-producing calls are decoded into dicts here; the rest pass through.
"""

import json

from . import _hierlab
from ._hierlab import HierlabError, defeq, format_module, generate_hierarchy, resolve

__all__ = [
    "HierlabError",
    "defeq",
    "diamonds",
    "elaborate",
    "format_module",
    "generate_hierarchy",
    "resolve",
    "spanning_search",
]


def elaborate(text, encoding="nested", parent_order=None):
    return json.loads(_hierlab.elaborate(text, encoding, parent_order or {}, "json"))


def diamonds(text, encoding="nested", eta_kernel=True, eta_unifier=False,
             parent_order=None):
    return json.loads(
        _hierlab.diamonds(text, encoding, eta_kernel, eta_unifier, parent_order or {}))


def spanning_search(text, eta_kernel=True, eta_unifier=False):
    return json.loads(_hierlab.spanning_search(text, eta_kernel, eta_unifier))
