"""Tests for pyfareinspection"""
