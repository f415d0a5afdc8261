"""
API routes and handlers
"""
