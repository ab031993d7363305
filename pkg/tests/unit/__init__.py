"""Unit tests for random-cc"""
