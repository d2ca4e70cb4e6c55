/** Colour mapping: blue intensity scale for density, gray below threshold.
 *
 * Low densities draw dark blue, high densities light blue; cells whose
 * density falls below the current HDR threshold are grayed out.  The
 * ramp interpolates in sRGB between two fixed anchors, which is close
 * enough to perceptually uniform over this short blue range.
 */

export const GRAY = "rgb(225,225,225)";

const DARK: [number, number, number] = [8, 48, 107];     // low density
const LIGHT: [number, number, number] = [198, 219, 239]; // high density

export function blueRamp(t: number): string {
    const u = Math.max(0, Math.min(1, t));
    const c = DARK.map((d, i) => Math.round(d + (LIGHT[i] - d) * u));
    return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/** Normalized ramp position of a density value within [lo, hi]. */
export function rampPosition(value: number, lo: number, hi: number): number {
    if (!(hi > lo)) return 0.5;
    return (value - lo) / (hi - lo);
}

export function cellColor(density: number, threshold: number, lo: number, hi: number): string {
    if (density < threshold) return GRAY;
    return blueRamp(rampPosition(density, lo, hi));
}
