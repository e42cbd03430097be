"""Re-rank a fused ranking by journal priors and by task-vector proximity.

Journal priors come from past judgments: a journal whose judged papers were
all relevant scores +1, all irrelevant -1, an even split 0, and unknown
journals 0. The final score is a linear mix of the min-max normalized
retrieval score and the prior. Vector re-ranking replaces the prior with
cosine proximity between a document vector and the task description vector,
mapped to [0, 1].
"""

import numpy as np

from taskrank import (
    Collection,
    Document,
    InMemoryVectorProvider,
    Qrels,
    RerankConfig,
    Task,
    build_journal_priors,
    rerank_by_journal,
    rerank_by_task_vector,
)

collection = Collection.from_documents([
    Document(doc_id="d1", title="risk factors in diabetes", journal="Diabetes Care"),
    Document(doc_id="d2", title="cardiovascular outcomes", journal="Heart Journal"),
    Document(doc_id="d3", title="unrelated metabolomics", journal="Omics Letters"),
    Document(doc_id="d4", title="hypertension cohort", journal="Heart Journal"),
])

# Past judgments: Diabetes Care and Heart Journal papers were mostly
# relevant to risk-factor topics, Omics Letters never was.
qrels = Qrels()
qrels.judgments.update({
    (1, "d1"): 2, (1, "d2"): 1, (1, "d3"): 0, (2, "d4"): 1, (2, "d3"): 0,
})
priors = build_journal_priors(qrels, collection)
print("journal priors:")
for journal, score in sorted(priors.scores.items()):
    print(f"  {journal:<16} {score:+.2f}")

fused = [("d3", 0.95), ("d1", 0.90), ("d4", 0.60), ("d2", 0.40)]
reranked = rerank_by_journal(fused, priors, collection, RerankConfig(alpha=0.7), 10)
print("\njournal re-rank (alpha=0.7):")
for doc_id, score in reranked:
    print(f"  {score:.4f}  {doc_id}")
# d3 led on retrieval score alone but its journal history drags it down.

task = Task(task_id="risk-factors", title="Risk factors",
            description="risk factors for severe disease")
provider = InMemoryVectorProvider({
    "risk-factors": np.array([1.0, 0.0, 0.0]),
    "d1": np.array([0.9, 0.1, 0.0]),
    "d2": np.array([0.8, 0.0, 0.2]),
    "d3": np.array([0.0, 1.0, 0.0]),
    # d4 has no vector: neutral proximity 0.5
})
vector_reranked = rerank_by_task_vector(
    fused, provider, task, RerankConfig(alpha=0.5), 10
)
print("\ntask-vector re-rank (alpha=0.5):")
for doc_id, score in vector_reranked:
    print(f"  {score:.4f}  {doc_id}")
