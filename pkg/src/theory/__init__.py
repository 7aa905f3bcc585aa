"""Threshold optimization and closed-form error-probability analysis."""
