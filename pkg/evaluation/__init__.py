"""
Scoring of predicted SGIs against ground truth: node-set match predicates,
existential relevance, adapted precision/recall and the F-measure.
"""
