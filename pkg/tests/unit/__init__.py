# tests/unit/__init__.py

"""
Testes unitários do fedquant
"""
