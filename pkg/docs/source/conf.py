# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

from pychebcurves import __version__


# -- Project information -----------------------------------------------------

project = 'pychebcurves'
copyright = '2024, pychebcurves developers'
author = 'pychebcurves developers'

# The short X.Y version
version = '.'.join(__version__.split('.')[:2])
# The full version, including alpha/beta/rc tags
release = __version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
]

source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = []
pygments_style = None



# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
htmlhelp_basename = 'pychebcurvesdoc'


# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'pychebcurves.tex', 'pychebcurves Documentation',
     author, 'manual'),
]

# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'pychebcurves', 'pychebcurves Documentation',
     [author], 1)
]
