"""
Utility functions for lplab
"""

# File helpers shared by the experiment reports
