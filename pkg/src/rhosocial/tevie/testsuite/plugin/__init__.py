# src/rhosocial/tevie/testsuite/plugin/__init__.py
