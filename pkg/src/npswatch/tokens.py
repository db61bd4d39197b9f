"""Token grammar shared by the index, alias matching, and stream filtering.

A token is a maximal run of Unicode letters and digits, optionally
joined by single internal hyphens, case-folded.  Runs shorter than two
characters and pure-digit runs are dropped, so dosage numbers vanish
while names like "1p-lsd" and "α-pvp" survive whole.
"""

import re

# [^\W_] is "word character minus underscore": Unicode letters and digits.
# A hyphen only joins when flanked by such runs, so "--" never glues.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*")


def tokenize(text: str) -> list[str]:
    """Split ``text`` into grammar tokens, case-folded, in order.

    >>> tokenize("Tried 1P-LSD, then α-PVP!")
    ['tried', '1p-lsd', 'then', 'α-pvp']
    >>> tokenize("100 mg of MDPV -- wow")
    ['mg', 'of', 'mdpv', 'wow']
    """
    out = []
    for run in _TOKEN_RE.findall(text.casefold()):
        if len(run) < 2:
            continue
        if run.replace("-", "").isdigit():
            continue
        out.append(run)
    return out
