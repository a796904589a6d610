"""Exact checks for phi_eps-coordinated modules of eps-affinized Novikov algebras."""
