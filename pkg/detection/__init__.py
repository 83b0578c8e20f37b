"""
The two detection approaches.

- `selection.py`: generate candidates, characterize, keep those near a sample
- `pruning.py`: predict bad nodes/edges, prune, return connected components
"""
