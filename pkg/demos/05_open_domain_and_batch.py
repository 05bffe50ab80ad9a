"""
Open-domain references and batch metrics
========================================

Keywords come from the question, the reference from the MediaWiki action
API, cached on disk so later runs work offline. A batch run then compares
system marks with human marks. Pass ``--offline`` to only use the cache, or
``--fixtures`` to answer API requests from the recorded test responses.
"""

import json
import sys
import tempfile
from pathlib import Path
from urllib.parse import urlencode

from answergrader import (
    CorpusEntry,
    GradingConfig,
    Question,
    compute_metrics,
    evaluate_batch,
    extract_keywords,
)
from answergrader.errors import NetworkError
from answergrader.harness import render_metrics

question = Question("dhaka", "What do you know about University of Dhaka?", 10)
print("keywords:", extract_keywords(question))

cache = Path(tempfile.gettempdir()) / "answergrader-demo-cache"
config = GradingConfig(mode="open", cache_dir=cache, offline="--offline" in sys.argv)

# Every reference word the student never uses is charged against the score,
# so one-line answers against a full encyclopedia extract bottom out at zero
# answer-analysis credit; only fuller answers earn it.
RICH = (Path(__file__).resolve().parent.parent / "tests" / "data" / "dhaka" / "student_answer.txt").read_text()
corpus = [
    CorpusEntry("dhaka", "s1", "The University of Dhaka was established in 1921 in Bangladesh.", 7),
    CorpusEntry("dhaka", "s2", "It is a university.", 2),
    CorpusEntry("dhaka", "s3", "Dhaka university is the oldest university of Bangladesh, founded in 1921.", 4),
    CorpusEntry("dhaka", "s4", RICH, 8),
]

RECORDED = Path(__file__).resolve().parent.parent / "tests" / "data" / "mediawiki"


def recorded_transport(url, params, headers, timeout):
    index = json.loads((RECORDED / "index.json").read_text())
    name = index.get(urlencode(sorted(params.items())))
    if name is None:
        raise NetworkError("no recorded response")
    return (RECORDED / name).read_bytes()


client = config.mediawiki_client()
if "--fixtures" in sys.argv:
    client.transport = recorded_transport
    client.min_interval = 0.0

try:
    result = evaluate_batch(corpus, config, questions={"dhaka": question}, client=client)
except Exception as exc:  # EmptyBatch when every entry failed
    print("batch failed:", exc)
    sys.exit(0)

for f in result.failures:
    print("failed:", f)
if result.breakdowns:
    for b in result.breakdowns:
        print(b.student_id, round(b.final_score, 2))
    scored = {(b.question_id, b.student_id) for b in result.breakdowns}
    human = [e for e in corpus if (e.question_id, e.student_id) in scored]
    print(render_metrics(compute_metrics(result.breakdowns, human, config.threshold)))
