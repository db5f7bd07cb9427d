# paramark/__init__.py
"""Parameter synthesis for parametric Markov chains and Markov decision processes."""
__version__ = "0.1.0"
