"""srcmine: mining scholarly papers for released source code.

Subpackages:
  ingest      corpus parsing, sentence segmentation, URL mention extraction
  classify    own-code sentence classifier (rules, linear baseline, remote hook)
  probe       repository platform/accessibility/metadata probing
  readme      README segmentation, flags, and multi-label categorization
  stats       the statistical battery and corpus aggregations
  annotation  labeling service for building README datasets
  pipeline    stage orchestration with run manifests
"""

__version__ = "0.1.0"
