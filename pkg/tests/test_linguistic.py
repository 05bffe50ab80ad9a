import threading
import time

import pytest
from hypothesis import given, strategies as st

from answergrader.errors import EmptyAnswer, GrammarServiceUnavailable, MisconfiguredChecker
from answergrader.linguistic import (
    RULE_AGREEMENT,
    RULE_CAPITALIZATION,
    RULE_DOUBLED,
    RULE_TERMINATOR,
    BuiltinGrammar,
    RemoteGrammar,
    SpellingDictionary,
    analyze,
    check_grammar,
    check_spelling,
    linguistic_score,
)

DICT = SpellingDictionary(frozenset({"the", "cat", "sat"}))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("the catt sat", [("catt", 1)]),
        ("", []),
        ("the cat sat", []),
        ("The CAT sat", []),
        ("the cat sat 42 times in the US", [("times", 4), ("in", 5)]),
    ],
)
def test_check_spelling(text, expected):
    assert check_spelling(text, DICT) == expected


def test_check_spelling_needs_dictionary():
    with pytest.raises(MisconfiguredChecker):
        check_spelling("anything", SpellingDictionary(frozenset()))


@given(st.lists(st.sampled_from(["the", "cat", "sat", "The", "CAT", "Sat"]), max_size=20))
def test_no_false_positives_against_own_dictionary(words):
    assert check_spelling(" ".join(words), DICT) == []


def test_dictionary_file(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("alpha\nBeta\n# comment\n")
    d = SpellingDictionary.from_file(path)
    assert "beta" in d and "alpha" in d and len(d) == 2


def test_default_dictionary_size_and_content():
    d = SpellingDictionary.default()
    assert len(d) >= 50_000
    for word in ("university", "established", "students", "the"):
        assert word in d
    for typo in ("recieve", "teh", "definately"):
        assert typo not in d


@pytest.mark.parametrize(
    "sentences, expected",
    [
        ([], []),
        (["The cat sat."], []),
        (["He go home."], [(0, RULE_AGREEMENT)]),
        # the capitalization rule also fires on a lowercase first word
        (["he go home."], [(0, RULE_CAPITALIZATION), (0, RULE_AGREEMENT)]),
        (["She goes home."], []),
        (["Does he go home?"], []),
        (["Let it go."], []),
        (["The the cat sat."], [(0, RULE_DOUBLED)]),
        (["The cat sat"], [(0, RULE_TERMINATOR)]),
        (["1921 was the year."], []),
        (["Fine.", "it work.", "Ok"], [(1, RULE_CAPITALIZATION), (1, RULE_AGREEMENT), (2, RULE_TERMINATOR)]),
    ],
)
def test_builtin_grammar(sentences, expected):
    assert check_grammar(sentences, BuiltinGrammar()) == expected


class FakeService:
    def __init__(self, matches_per_sentence=1, fail=False, delay=0.0):
        self.n = matches_per_sentence
        self.fail = fail
        self.delay = delay
        self.in_flight = 0
        self.peak = 0
        self.lock = threading.Lock()
        self.requests = []

    def __call__(self, url, data, timeout):
        with self.lock:
            self.in_flight += 1
            self.peak = max(self.peak, self.in_flight)
            self.requests.append((url, data))
        try:
            time.sleep(self.delay)
            if self.fail:
                raise GrammarServiceUnavailable("boom")
            return {"matches": [{"rule": {"id": f"RULE_{i}"}, "offset": 0} for i in range(self.n)]}
        finally:
            with self.lock:
                self.in_flight -= 1


def test_remote_backend_maps_matches():
    service = FakeService(matches_per_sentence=2)
    backend = RemoteGrammar("http://lt.local/", transport=service)
    assert backend.check(["A.", "B."]) == [(0, "RULE_0"), (0, "RULE_1"), (1, "RULE_0"), (1, "RULE_1")]
    assert service.requests[0] == ("http://lt.local/v2/check", {"text": "A.", "language": "en-US"})


def test_remote_backend_failure_and_degrade():
    with pytest.raises(GrammarServiceUnavailable):
        RemoteGrammar("http://lt.local", transport=FakeService(fail=True)).check(["he go."])
    degraded = RemoteGrammar("http://lt.local", transport=FakeService(fail=True), fallback=BuiltinGrammar())
    assert degraded.check(["He go home."]) == [(0, RULE_AGREEMENT)]


def test_remote_backend_rejects_bad_payload():
    backend = RemoteGrammar("http://lt.local", transport=lambda url, data, timeout: {"nope": 1})
    with pytest.raises(GrammarServiceUnavailable):
        backend.check(["x."])


@pytest.mark.parametrize("limit", [1, 2])
def test_remote_backend_limits_in_flight(limit):
    service = FakeService(delay=0.02)
    backend = RemoteGrammar("http://lt.local", max_in_flight=limit, transport=service)
    threads = [threading.Thread(target=backend.check, args=(["A."],)) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert service.peak <= limit


@pytest.mark.parametrize(
    "args, penalty, score",
    [
        ((2, 1, 100, 10), 12.0, 88.0),
        ((0, 0, 50, 5), 0.0, 100.0),
        ((50, 10, 50, 10), 200.0, 0.0),
    ],
)
def test_linguistic_score(args, penalty, score):
    report = linguistic_score(*args)
    assert report.penalty == penalty
    assert report.la_score == score


@pytest.mark.parametrize("args", [(0, 0, 0, 1), (0, 0, 1, 0)])
def test_linguistic_score_empty(args):
    with pytest.raises(EmptyAnswer):
        linguistic_score(*args)


@given(
    st.integers(1, 200),
    st.integers(1, 50),
    st.data(),
)
def test_linguistic_monotone_and_bounded(t_word, t_sentence, data):
    s = data.draw(st.integers(0, t_word - 1))
    g = data.draw(st.integers(0, 60))
    base = linguistic_score(s, g, t_word, t_sentence)
    assert 0.0 <= base.la_score <= 100.0
    assert linguistic_score(s + 1, g, t_word, t_sentence).la_score <= base.la_score
    assert linguistic_score(s, g + 1, t_word, t_sentence).la_score <= base.la_score


def test_analyze(tiny_dictionary):
    report = analyze("The cat sat. he go home", tiny_dictionary)
    # no spelling mistakes; lowercase start, agreement, missing terminator
    assert (report.s_mistake, report.g_mistake, report.t_word, report.t_sentence) == (0, 3, 6, 2)
    assert report.penalty == 150.0 and report.la_score == 0.0
