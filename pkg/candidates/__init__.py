"""
Candidate cluster generation (the SUBGRAPHS step of the first approach).

- `label_propagation.py`: overlapping speaker-listener label propagation
- `mcs.py`: maximum common subgraph of the samples, used as a query
- `matching.py`: QueryGraph and multiplicity-aware subgraph matching
- `generators.py`: selects one of the above from configuration
"""
