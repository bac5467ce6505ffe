"""Breadth-first asset crawl of a live installation.

The crawler collects exactly what a probe could later request: images,
stylesheets and scripts, plus the HTML pages that link them. Link
harvesting covers HTML src/href attributes, CSS url()/@import references
and script string literals that name a known probeable extension.

Determinism contract: given identical server responses, two crawls store
identical file sets. The frontier is processed in discovery order with
same-document links sorted lexicographically; fetches may overlap up to
the concurrency cap but results are folded in in queue order.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from html.parser import HTMLParser
from urllib.parse import urldefrag, urljoin, urlsplit

import requests

from .corpus import ServiceFileSet, ServiceId, filetype_for_path
from .errors import CrawlError

__all__ = ["CrawlLimits", "crawl_live"]

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_CONCURRENCY = 4

_CSS_URL_RE = re.compile(r"""url\(\s*['"]?([^'")\s]+)['"]?\s*\)""", re.I)
_CSS_IMPORT_RE = re.compile(r"""@import\s+['"]([^'"]+)['"]""", re.I)
_JS_STRING_RE = re.compile(r"""(['"])((?:\\.|(?!\1).)+?)\1""")
_PAGEISH_EXTENSIONS = frozenset({
    "", ".html", ".htm", ".php", ".asp", ".aspx", ".jsp", ".cgi", ".pl",
})


@dataclass(frozen=True)
class CrawlLimits:
    max_pages: int = 50
    max_depth: int = 5
    same_host_only: bool = True


class _LinkCollector(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.links: list[str] = []

    def handle_starttag(self, tag, attrs) -> None:
        for name, value in attrs:
            if name in ("src", "href") and value:
                self.links.append(value)


def _harvest_html(text: str) -> list[str]:
    collector = _LinkCollector()
    try:
        collector.feed(text)
        collector.close()
    except Exception:
        pass
    return collector.links


def _harvest_css(text: str) -> list[str]:
    return _CSS_IMPORT_RE.findall(text) + _CSS_URL_RE.findall(text)


def _harvest_js(text: str) -> list[str]:
    found = []
    for _, literal in _JS_STRING_RE.findall(text):
        if filetype_for_path(literal) in ("image", "css", "js"):
            found.append(literal)
    return found


def _storage_key(url: str) -> str:
    parts = urlsplit(url)
    key = parts.path.lstrip("/")
    if parts.query:
        key = f"{key}?{parts.query}"
    return key


def crawl_live(base_url: str, service: ServiceId,
               limits: CrawlLimits | None = None,
               timeout: float = DEFAULT_TIMEOUT_S,
               concurrency: int = DEFAULT_CONCURRENCY) -> ServiceFileSet:
    """Crawl from base_url and return the probeable file set.

    Raises CrawlError when the entry page itself is unreachable;
    individual resource failures are logged and skipped.
    """
    limits = limits or CrawlLimits()
    base_parts = urlsplit(base_url)
    if base_parts.scheme not in ("http", "https"):
        raise CrawlError(f"unsupported scheme in {base_url!r}")

    fileset = ServiceFileSet(service=service, provenance="crawl")
    session = requests.Session()

    def fetch(url: str):
        try:
            response = session.get(url, timeout=timeout)
            response.raise_for_status()
            return response
        except requests.RequestException as exc:
            return exc

    first = fetch(base_url)
    if isinstance(first, Exception):
        raise CrawlError(f"cannot fetch {base_url}: {first}")

    queue: list[tuple[str, int]] = [(base_url, 0)]
    responses = {base_url: first}
    seen_urls = {urldefrag(base_url)[0]}
    pages_fetched = 0

    def enqueue_links(document_url: str, depth: int, raw_links: list[str]) -> None:
        if depth + 1 > limits.max_depth:
            return
        resolved = []
        for raw in raw_links:
            absolute, _ = urldefrag(urljoin(document_url, raw))
            parts = urlsplit(absolute)
            if parts.scheme not in ("http", "https"):
                continue
            if limits.same_host_only and parts.netloc != base_parts.netloc:
                continue
            resolved.append(absolute)
        # discovery order by document, lexicographic within one document
        for url in sorted(set(resolved)):
            if url not in seen_urls:
                seen_urls.add(url)
                queue.append((url, depth + 1))

    position = 0
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        while position < len(queue):
            # prefetch the next wave concurrently, fold results in order
            wave = [(u, d) for u, d in queue[position:position + max(1, concurrency)]
                    if u not in responses]
            for (url, _), response in zip(
                    wave, pool.map(fetch, (u for u, _ in wave))):
                responses[url] = response

            url, depth = queue[position]
            position += 1
            response = responses.pop(url)
            if isinstance(response, Exception):
                log.warning("crawl: failed to fetch %s: %s", url, response)
                continue

            content_type = response.headers.get("Content-Type", "")
            key = _storage_key(url)
            is_page = "text/html" in content_type.lower()
            filetype = filetype_for_path(key)

            if is_page:
                if pages_fetched >= limits.max_pages:
                    continue
                pages_fetched += 1
                if key not in fileset.files:
                    fileset.add(key, response.content)
                enqueue_links(url, depth, _harvest_html(response.text))
                continue

            if filetype not in ("image", "css", "js"):
                continue
            if key not in fileset.files:
                fileset.add(key, response.content, filetype)
            if filetype == "css":
                enqueue_links(url, depth, _harvest_css(response.text))
            elif filetype == "js":
                enqueue_links(url, depth, _harvest_js(response.text))

    return fileset
