"""
From raw answer text to a word-frequency table
==============================================

Cleaning, tokenizing and counting words in a short answer.
"""

from answergrader import build_frequency, count_words, preprocess, split_sentences, strip_special

answer = "The University of Dhaka, founded in 1921, is in Dhaka! The US has #many universities."

# special characters go, sentence terminators stay
print(strip_special(answer))

# sentences feed the grammar checker, raw words the spelling rate
print(split_sentences(answer))
print("raw words:", count_words(answer))

# lowercase (except whitelisted acronyms such as US), stopwords dropped
tokens = preprocess(answer)
print(tokens)

table = build_frequency(tokens)
print(table.distinct_count, "distinct /", table.total_count, "total")
print(table.to_text())
