#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# aoapy documentation build configuration file.

import os
import sys

# Import the package from the checkout rather than site-packages.
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import aoapy

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode',
              'sphinx.ext.mathjax']
autodoc_member_order = 'bysource'

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'aoapy'
copyright = u'2024, the aoapy developers'
version = aoapy.__version__
release = aoapy.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'aoapydoc'

latex_documents = [
    ('index', 'aoapy.tex', u'aoapy Documentation',
     u'The aoapy developers', 'manual'),
]

man_pages = [
    ('index', 'aoapy', u'aoapy Documentation',
     [u'The aoapy developers'], 1)
]
