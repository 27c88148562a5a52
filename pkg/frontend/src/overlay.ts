/** Geometry for drawing highlight rectangles over page scans.
 *
 * Line bboxes are in pixels of the original scan; the overlay container
 * tracks the displayed image, so every rectangle scales by the ratio of
 * displayed to natural width. The OCR text may be imperfect, so the scan
 * plus a box is the ground truth we show, never re-rendered text.
 */

export interface RectStyle {
  left: string;
  top: string;
  width: string;
  height: string;
}

export function overlayRect(
  bbox: [number, number, number, number],
  scale: number,
): RectStyle {
  const [x, y, w, h] = bbox;
  return {
    left: `${x * scale}px`,
    top: `${y * scale}px`,
    width: `${w * scale}px`,
    height: `${h * scale}px`,
  };
}

export function applyRect(node: HTMLElement, style: RectStyle): void {
  node.style.left = style.left;
  node.style.top = style.top;
  node.style.width = style.width;
  node.style.height = style.height;
}

/** Re-position every overlay in a page container for a new scale; the
 * original bbox travels on a data attribute so resizes are lossless. */
export function layoutOverlays(container: HTMLElement, scale: number): void {
  container.querySelectorAll<HTMLElement>(".overlay").forEach((node) => {
    const bbox = JSON.parse(node.dataset.bbox ?? "[0,0,0,0]") as
      [number, number, number, number];
    applyRect(node, overlayRect(bbox, scale));
  });
}
