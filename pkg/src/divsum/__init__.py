"""Divergence-based extractive summarization and evaluation."""
