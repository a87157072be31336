"""Tests for metric-graph-ops."""
