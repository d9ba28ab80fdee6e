// Minimal sanitized markdown renderer for README subtexts.
//
// All source text is HTML-escaped before any markup of our own is added,
// so script tags and inline handlers can never survive; link and image
// targets are restricted to http(s) URLs.

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch]);
}

function safeUrl(raw: string): string | null {
  const trimmed = raw.trim();
  if (/^https?:\/\//i.test(trimmed)) {
    return trimmed;
  }
  return null;
}

function renderInline(escaped: string): string {
  let out = escaped;
  out = out.replace(/`([^`]+)`/g, (_m, code: string) => `<code>${code}</code>`);
  out = out.replace(/\*\*([^*]+)\*\*/g, "<strong>$1</strong>");
  out = out.replace(/\*([^*]+)\*/g, "<em>$1</em>");
  // images before links: ![alt](src)
  out = out.replace(/!\[([^\]]*)\]\(([^)\s]+)\)/g, (_m, alt: string, src: string) => {
    const url = safeUrl(src);
    return url ? `<img alt="${alt}" src="${url}">` : alt;
  });
  out = out.replace(/\[([^\]]+)\]\(([^)\s]+)\)/g, (_m, text: string, href: string) => {
    const url = safeUrl(href);
    return url
      ? `<a href="${url}" target="_blank" rel="noopener noreferrer">${text}</a>`
      : text;
  });
  return out;
}

/** Render markdown to sanitized HTML: fences, headers, lists, paragraphs. */
export function renderMarkdown(markdown: string): string {
  const lines = markdown.split(/\r?\n/);
  const html: string[] = [];
  let paragraph: string[] = [];
  let listItems: string[] = [];
  let inFence = false;
  let fenceChar = "";
  let fenceBody: string[] = [];

  const flushParagraph = () => {
    if (paragraph.length) {
      html.push(`<p>${renderInline(escapeHtml(paragraph.join(" ")))}</p>`);
      paragraph = [];
    }
  };
  const flushList = () => {
    if (listItems.length) {
      html.push(`<ul>${listItems.join("")}</ul>`);
      listItems = [];
    }
  };

  for (const line of lines) {
    const fence = line.match(/^ {0,3}(```+|~~~+)/);
    if (inFence) {
      if (fence && fence[1][0] === fenceChar) {
        html.push(`<pre><code>${escapeHtml(fenceBody.join("\n"))}</code></pre>`);
        fenceBody = [];
        inFence = false;
      } else {
        fenceBody.push(line);
      }
      continue;
    }
    if (fence) {
      flushParagraph();
      flushList();
      inFence = true;
      fenceChar = fence[1][0];
      continue;
    }
    const header = line.match(/^ {0,3}(#{1,6})\s+(.*?)\s*#*\s*$/);
    if (header) {
      flushParagraph();
      flushList();
      const level = header[1].length;
      html.push(`<h${level}>${renderInline(escapeHtml(header[2]))}</h${level}>`);
      continue;
    }
    const item = line.match(/^ {0,3}[-*+]\s+(.*)$/);
    if (item) {
      flushParagraph();
      listItems.push(`<li>${renderInline(escapeHtml(item[1]))}</li>`);
      continue;
    }
    if (!line.trim()) {
      flushParagraph();
      flushList();
      continue;
    }
    paragraph.push(line.trim());
  }
  if (inFence) {
    // unclosed fence: still render as code, never as markup
    html.push(`<pre><code>${escapeHtml(fenceBody.join("\n"))}</code></pre>`);
  }
  flushParagraph();
  flushList();
  return html.join("\n");
}
