# -*- coding: utf-8 -*-
#
# lorentzlens documentation build configuration file
#

import sys
import os

sys.path.insert(0,os.path.abspath(os.path.join("..","..")))
import lorentzlens

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

source_suffix = '.rst'
master_doc = 'index'

project = u'lorentzlens'
copyright = u'2026, lorentzlens contributors'

version = lorentzlens.__version__
release = lorentzlens.__version__

exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'lorentzlensdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'lorentzlens.tex', u'lorentzlens Documentation',
   u'lorentzlens contributors', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'lorentzlens', u'lorentzlens Documentation',
     [u'lorentzlens contributors'], 1)
]
