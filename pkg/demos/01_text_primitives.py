"""Tour of the deterministic text primitives every metric builds on.

Run:  python3 demos/01_text_primitives.py
"""

from laypress import textproc

# Tokenization lowercases, splits on anything non-alphanumeric, and finds
# sentence boundaries with a fixed abbreviation list (so "Dr." does not end
# a sentence).
text = "Dr. Smith studied sleeping mice. The rested mice solved mazes faster!"
t = textproc.tokenize(text)
print("tokens:   ", t.tokens)
print("sentences:", [" ".join(s) for s in t.sentence_tokens()])

# The Porter stemmer conflates inflected forms; the default mode matches the
# official published test vocabulary.
for word in ("caresses", "running", "studies", "biologically", "sky"):
    print(f"stem({word}) = {textproc.porter_stem(word)}")

# Syllables come from a simple vowel-group heuristic, floored at one.
for word in ("cat", "hello", "banana", "the"):
    print(f"syllables({word}) = {textproc.count_syllables(word)}")
