"""
Element characterization for the detection pipelines.

This package provides:
- Feature schemas and fixed-size vectors (`schema.py`)
- Subgraph, node and edge feature extraction (`extractor.py`)
- The cosine distance used for every similarity check (`distance.py`)
- A cached store of training-sample vectors (`sample_index.py`)
"""
