"""
Ranking documents by agreement with the aggregate
=================================================

Each document's log10 term proportions are correlated against the pooled
proportions of every other document (leave-one-out). Documents from the
majority topic mirror the aggregate best, so they monopolize the top of
the table -- the correlation ranks *typicality*, not quality.
"""

from collections import Counter

from layerstack import rank_documents, synthetic_corpus

# 36 documents: topics of 18, 12, and 6 documents.
corpus, topic_of = synthetic_corpus((18, 12, 6), seed=0)
print(f"{len(corpus)} documents, topic sizes: {Counter(topic_of.values())}")

ranked = rank_documents(corpus, top_k=5)
print("\ntitle\tcorrelation\tp_value")
for res in ranked:
    print(f"{corpus.get(res.doc_id).title}\t{res.r:.3f}\t{res.p_value:.2e}")

# Every one of the five winners comes from the 18-document majority topic.
winners = [topic_of[res.doc_id] for res in ranked]
print(f"\nwinning topics: {winners}")

# The flip side: the minority topic is pushed to the bottom of the table.
full = rank_documents(corpus, top_k=len(corpus))
tail = [topic_of[res.doc_id] for res in full[-5:]]
print(f"bottom-5 topics: {tail}")
