#!/usr/bin/env python3
"""Wire the pipeline to the real CORD-19 / TREC-COVID data.

This script is the optional full-scale path: the bundled fixtures are tiny
and the shipped lexicon extractor is a stand-in for a biomedical NER model,
so published-scale numbers require the real inputs:

  1. CORD-19 metadata.csv (https://www.semanticscholar.org/cord19)
  2. TREC-COVID topics XML and cumulative qrels
     (https://ir.nist.gov/trec-covid/data.html)
  3. optionally, a lexicon exported from a real entity recognizer such as
     ScispaCy (one lowercase term per line) via --lexicon

It converts the inputs into the corpus/topic formats this package reads,
then produces and scores fusion runs for the requested variants.

Example:
    python scripts/trec_covid_integration.py \
        --metadata /data/cord19/metadata.csv \
        --topics-xml /data/topics-rnd4.xml \
        --qrels /data/qrels-rnd4.txt \
        --variants query query+task \
        --workdir /tmp/trec-covid
"""

import argparse
import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path


def convert_metadata(metadata_csv: Path, corpus_out: Path) -> int:
    """CORD-19 metadata.csv -> corpus JSON lines (title+abstract only).

    Full-text bodies live in the per-paper JSON parses; metadata alone is
    enough for the title+abstract indices and gives the full-text index a
    title+abstract fallback. Extend here if you have the document parses.
    """
    count = 0
    seen = set()
    with open(metadata_csv, encoding="utf-8", newline="") as fh, \
         open(corpus_out, "w", encoding="utf-8") as out:
        for row in csv.DictReader(fh):
            doc_id = (row.get("cord_uid") or "").strip()
            if not doc_id or doc_id in seen:
                continue
            seen.add(doc_id)
            record = {
                "doc_id": doc_id,
                "title": (row.get("title") or "").strip(),
                "abstract": (row.get("abstract") or "").strip(),
                "body": "",
                "journal": (row.get("journal") or "").strip(),
                "date": (row.get("publish_time") or "").strip(),
            }
            out.write(json.dumps(record) + "\n")
            count += 1
    return count


def convert_topics(topics_xml: Path, topics_out: Path, id_offset: int) -> int:
    """TREC-COVID topics XML -> topic JSON lines.

    The shipped manual map numbers topics from 0 while the official XML
    numbers them from 1, so the default offset is -1.
    """
    tree = ET.parse(topics_xml)
    count = 0
    with open(topics_out, "w", encoding="utf-8") as out:
        for topic in tree.getroot().iter("topic"):
            number = int(topic.attrib["number"]) + id_offset
            fields = {child.tag: (child.text or "").strip() for child in topic}
            out.write(json.dumps({
                "topic_id": number,
                "query": fields.get("query", ""),
                "question": fields.get("question", ""),
                "narrative": fields.get("narrative", ""),
            }) + "\n")
            count += 1
    return count


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--metadata", required=True, type=Path)
    parser.add_argument("--topics-xml", required=True, type=Path)
    parser.add_argument("--qrels", required=True, type=Path)
    parser.add_argument("--workdir", required=True, type=Path)
    parser.add_argument("--variants", nargs="+", default=["query", "query+task"])
    parser.add_argument("--lexicon", type=Path, help="richer term lexicon (optional)")
    parser.add_argument("--topic-id-offset", type=int, default=-1)
    parser.add_argument("--k", type=int, default=20)
    args = parser.parse_args()

    args.workdir.mkdir(parents=True, exist_ok=True)
    corpus = args.workdir / "corpus.jsonl"
    topics = args.workdir / "topics.jsonl"
    print(f"converting {args.metadata} ...")
    print(f"  {convert_metadata(args.metadata, corpus)} documents")
    print(f"converting {args.topics_xml} ...")
    print(f"  {convert_topics(args.topics_xml, topics, args.topic_id_offset)} topics")

    for variant in args.variants:
        run_path = args.workdir / f"{variant.replace('+', '_').replace('.', '_')}.run"
        cmd = [
            sys.executable, "-m", "taskrank.cli", "run",
            "--corpus", str(corpus),
            "--topics", str(topics),
            "--variant", variant,
            "--output", str(run_path),
        ]
        if args.lexicon:
            cmd += ["--lexicon", str(args.lexicon)]
        if variant in ("journal.prior", "journal.task"):
            cmd += ["--qrels", str(args.qrels)]
        print("+", " ".join(cmd))
        subprocess.run(cmd, check=True)
        subprocess.run([
            sys.executable, "-m", "taskrank.cli", "eval",
            "--run", str(run_path), "--qrels", str(args.qrels), "--k", str(args.k),
        ], check=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
