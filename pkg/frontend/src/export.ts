/** Report download: fetch the export body and hand it to the browser
 * unchanged. The UI offers only the two formats the API accepts. */

import type { ApiClient } from "./api.js";
import type { ExportFormat } from "./types.js";

export const EXPORT_FORMATS: ExportFormat[] = ["csv", "json"];

export function exportFilename(course: string, format: ExportFormat): string {
  return `${course}-report.${format}`;
}

/** Fetches the document body verbatim; callers pass it to
 * triggerDownload without transformation so the file on disk is
 * byte-identical to the API response. */
export async function fetchExport(
  client: ApiClient,
  course: string,
  format: ExportFormat,
): Promise<string> {
  return client.exportReport(course, format);
}

export function triggerDownload(content: string, filename: string, doc: Document = document): void {
  const blob = new Blob([content], { type: "application/octet-stream" });
  const url = URL.createObjectURL(blob);
  const anchor = doc.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  doc.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
