# -*- coding: utf-8 -*-
#
# tsgame documentation build configuration file.

import os
import sys

cwd = os.getcwd()
project_root = os.path.dirname(cwd)
sys.path.insert(0, project_root)

import tsgame  # noqa: E402

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'tsgame'
copyright = u'tsgame developers'

version = tsgame.__version__
release = tsgame.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'tsgamedoc'

latex_documents = [
    ('index', 'tsgame.tex', u'tsgame Documentation', u'tsgame developers', 'manual'),
]

man_pages = [
    ('index', 'tsgame', u'tsgame Documentation', [u'tsgame developers'], 1),
]
