"""Adapter from TEI-style XML (as emitted by PDF-to-XML converters) to the
line-delimited corpus schema.  The PDF conversion itself happens upstream."""

import xml.etree.ElementTree as ET


def _local(tag):
    return tag.rsplit("}", 1)[-1]


def _text_of(elem):
    return " ".join("".join(elem.itertext()).split())


def tei_to_record(xml_text: str, paper_id: str, venue: str = "", year: int = 1900) -> dict:
    """Flatten one TEI document into a corpus record dict."""
    root = ET.fromstring(xml_text)
    title = ""
    abstract = ""
    sections = []
    for elem in root.iter():
        tag = _local(elem.tag)
        if tag == "title" and not title:
            title = _text_of(elem)
        elif tag == "abstract" and not abstract:
            abstract = _text_of(elem)
    body_divs = [e for e in root.iter() if _local(e.tag) == "div"]
    for div in body_divs:
        head = ""
        paragraphs = []
        for child in div:
            tag = _local(child.tag)
            if tag == "head" and not head:
                head = _text_of(child)
            elif tag == "p":
                paragraphs.append(_text_of(child))
        is_references = div.get("type") == "references" or any(
            _local(c.tag) == "listBibl" for c in div.iter()
        )
        if is_references and not paragraphs:
            paragraphs = [_text_of(div)]
        if head or paragraphs:
            sections.append(
                {
                    "name": head or ("References" if is_references else ""),
                    "is_references": is_references,
                    "text": " ".join(paragraphs),
                }
            )
    return {
        "paper_id": paper_id,
        "venue": venue,
        "year": year,
        "title": title,
        "abstract": abstract,
        "sections": sections,
    }
