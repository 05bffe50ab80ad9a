"""
Spelling and grammar penalties
==============================

Mistake rates per word and per sentence are added into a penalty and the
linguistic score is what is left of 100.
"""

from answergrader import BuiltinGrammar, SpellingDictionary, analyze, check_spelling, linguistic_score
from answergrader.preprocess import split_sentences

text = "The universty was founded in 1921. he go there every day. It is is old"

dictionary = SpellingDictionary.default()
print(len(dictionary), "dictionary words")
print("spelling:", check_spelling(text, dictionary))
print("grammar:", BuiltinGrammar().check(split_sentences(text)))

report = analyze(text, dictionary)
print(report)

# the arithmetic on its own
print(linguistic_score(2, 1, 100, 10))
