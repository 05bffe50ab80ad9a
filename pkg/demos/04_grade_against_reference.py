"""
Grading one answer script
=========================

A closed-domain model answer stands in for the reference here so the demo
runs offline. With ``mode="open"`` and network access the reference would
come from Wikipedia instead (see 05).
"""

import tempfile
from pathlib import Path

from answergrader import GradingConfig, ModelAnswerStore, ScoreWeights, grade, render_report, resolve_reference

root = Path(tempfile.mkdtemp())
store = ModelAnswerStore(root / "store")
store.add(
    "photosynthesis",
    "Photosynthesis is the process by which green plants use sunlight, water and "
    "carbon dioxide to make glucose. Oxygen is released as a by-product. The "
    "process takes place in the chloroplasts, which contain chlorophyll.",
    total_mark=10,
    question_text="What is photosynthesis?",
)

config = GradingConfig(store_root=root / "store", mode="closed", cache_dir=root / "cache")
question = store.question("photosynthesis")
reference = resolve_reference(question, config.mode, store=store)

answer = (
    "Photosynthesis is how plants make glucose from sunlight, water and carbon "
    "dioxide. It happens in the chloroplasts and releases oxygen."
)
print(render_report(grade(answer, reference, question, config)))

# the admin can move weight between the two parts
config.weights = ScoreWeights(0.5, 0.5)
print(render_report(grade(answer, reference, question, config)))
