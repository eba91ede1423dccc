"""Fairway: bias detection and mitigation for tabular classifiers."""

__version__ = '0.3.1'
__codename__ = 'Even Keel'
