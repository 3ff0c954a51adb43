#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# asrmoea documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'numpydoc',
    ]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'asrmoea'
copyright = '2026, asrmoea developers'
author = 'asrmoea developers'

with open(os.path.join('..', '..', 'asrmoea', 'VERSION.txt')) as f:
    release = f.read().strip()
version = '.'.join(release.split('.')[:2])

language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = True


# -- Options for HTML output ----------------------------------------------

html_theme = 'nature'

htmlhelp_basename = 'asrmoeadoc'


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
    (master_doc, 'asrmoea.tex', 'asrmoea Documentation',
     author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'asrmoea', 'asrmoea Documentation',
     [author], 1)
]


# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (master_doc, 'asrmoea', 'asrmoea Documentation',
     author, 'asrmoea',
     'Black-box evolutionary adversarial audio for speech recognizers.',
     'Miscellaneous'),
]

numpydoc_show_class_members = False
