"""Built-in English stop-word list.

Every entry is lowercase and purely alphabetic so that it can actually be
produced by the tokenizer (tokens never contain apostrophes or digits).
Override with a one-term-per-line text file via
:func:`layerstack.corpus.load_stop_words`.
"""

from __future__ import annotations

ENGLISH_STOP_WORDS: frozenset[str] = frozenset("""
a about above after again against all also although am among an and another
any are as at
be because been before being below between both but by
can cannot could
did do does doing done down during
each either else even ever every
few for from further
had has have having he her here hers herself him himself his how however
i if in indeed instead into is it its itself
just
less
many may me might more most much must my myself
never no nor not now
of off on once one only onto or other others our ours ourselves out over
own
per perhaps
quite
rather
same several shall she should since so some someone something still such
than that the their theirs them themselves then there therefore these they
this those though through thus to too toward
under unless until up upon us
very via
was we well were what when where whereas whether which while who whom whose
why will with within without would
yet you your yours yourself yourselves
""".split())
