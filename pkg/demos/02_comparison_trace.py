"""
Comparing a student table with a reference table
================================================

The comparison credits shared words twice (once by reference weight, once by
count ratio) and charges every reference word the student never used. The
raw total is unbounded, so the score is clamped to [0, 100].
"""

from answergrader import FrequencyTable, compare_frequencies, weight_table

reference = FrequencyTable({"dhaka": 2, "university": 1})
student = FrequencyTable({"dhaka": 1, "university": 1})

print("reference weights:", weight_table(reference))

result = compare_frequencies(student, reference)
print(f"raw {result.aa_raw:.3f} -> score {result.aa_score}")

# a partial answer: one shared word, one unrelated, two reference words missed
partial = compare_frequencies(
    FrequencyTable({"dhaka": 1, "river": 1}),
    FrequencyTable({"dhaka": 2, "university": 1, "campus": 1}),
)
print(f"partial: raw {partial.aa_raw:.3f} -> score {partial.aa_score}")
print("matched:", partial.matched_words)
print("missing:", partial.missing_words)

# nothing in common: only the missing-word charge applies
print(compare_frequencies(FrequencyTable({"x": 1}), FrequencyTable({"y": 3})))
