"""
Unit tests for the OneTask API.
"""