import { describe, expect, it } from "vitest";

import { escapeHtml, renderMarkdown } from "../src/markdown.js";

describe("escapeHtml", () => {
  it("escapes the dangerous five", () => {
    expect(escapeHtml(`<script>alert("x&y'")</script>`)).toBe(
      "&lt;script&gt;alert(&quot;x&amp;y&#39;&quot;)&lt;/script&gt;",
    );
  });
});

describe("renderMarkdown", () => {
  it("renders headers, paragraphs and lists", () => {
    const html = renderMarkdown("## Install\n\npip install x\n\n- one\n- two");
    expect(html).toContain("<h2>Install</h2>");
    expect(html).toContain("<p>pip install x</p>");
    expect(html).toContain("<li>one</li>");
  });

  it("renders fenced blocks as code, not headers", () => {
    const html = renderMarkdown("```\n# not a header\nmake install\n```");
    expect(html).toContain("<pre><code># not a header\nmake install</code></pre>");
    expect(html).not.toMatch(/<h\d>/);
  });

  it("keeps an unclosed fence as code", () => {
    const html = renderMarkdown("```\n# hidden");
    expect(html).toContain("<pre><code># hidden</code></pre>");
    expect(html).not.toMatch(/<h\d>/);
  });

  it("strips script tags by escaping", () => {
    const html = renderMarkdown("hello <script>alert(1)</script> world");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("allows only http(s) link targets", () => {
    const good = renderMarkdown("[docs](https://example.org/docs)");
    expect(good).toContain('href="https://example.org/docs"');
    const bad = renderMarkdown("[evil](javascript:alert(1))");
    expect(bad).not.toContain("javascript:");
    expect(bad).toContain("evil");
  });

  it("renders inline code and emphasis", () => {
    const html = renderMarkdown("run `make` with **force** and *care*");
    expect(html).toContain("<code>make</code>");
    expect(html).toContain("<strong>force</strong>");
    expect(html).toContain("<em>care</em>");
  });

  it("renders badges as images with safe sources only", () => {
    const html = renderMarkdown("![CI](https://img.shields.io/badge.svg)");
    expect(html).toContain('src="https://img.shields.io/badge.svg"');
    const unsafe = renderMarkdown("![x](javascript:bad())");
    expect(unsafe).not.toContain("<img");
  });
});
