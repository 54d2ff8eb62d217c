"""
Package de tests pour repfree.
"""
