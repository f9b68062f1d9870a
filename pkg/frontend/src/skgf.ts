/**
 * SKGF field snapshot format.
 *
 * Little-endian header: magic "SKGF", u32 version (=1), u32 nx, u32 ny,
 * f64 extent, u32 component count; then components * ny * nx float64
 * values, row-major (row index j runs along y), component-major.
 */

export interface SkgfFile {
  nx: number;
  ny: number;
  extent: number;
  components: Float64Array[];
}

const MAGIC = "SKGF";
const HEADER_BYTES = 28;

export class SkgfError extends Error {
  constructor(message: string, public readonly offset: number) {
    super(`${message} (byte offset ${offset})`);
    this.name = "SkgfError";
  }
}

export function parseSkgf(buf: Uint8Array): SkgfFile {
  if (buf.byteLength < HEADER_BYTES) {
    throw new SkgfError(`file too short for header: ${buf.byteLength} bytes`, 0);
  }
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const magic = String.fromCharCode(buf[0], buf[1], buf[2], buf[3]);
  if (magic !== MAGIC) {
    throw new SkgfError(`bad magic ${JSON.stringify(magic)}`, 0);
  }
  const version = view.getUint32(4, true);
  if (version !== 1) {
    throw new SkgfError(`unsupported version ${version}`, 4);
  }
  const nx = view.getUint32(8, true);
  const ny = view.getUint32(12, true);
  const extent = view.getFloat64(16, true);
  const ncomp = view.getUint32(24, true);
  const expected = HEADER_BYTES + 8 * nx * ny * ncomp;
  if (buf.byteLength !== expected) {
    throw new SkgfError(
      `payload size mismatch: have ${buf.byteLength}, header implies ${expected}`,
      HEADER_BYTES,
    );
  }
  const components: Float64Array[] = [];
  for (let c = 0; c < ncomp; c++) {
    const comp = new Float64Array(nx * ny);
    const base = HEADER_BYTES + 8 * nx * ny * c;
    for (let k = 0; k < nx * ny; k++) {
      comp[k] = view.getFloat64(base + 8 * k, true);
    }
    components.push(comp);
  }
  return { nx, ny, extent, components };
}

export function serializeSkgf(file: SkgfFile): Uint8Array {
  const n = file.nx * file.ny;
  const out = new Uint8Array(HEADER_BYTES + 8 * n * file.components.length);
  const view = new DataView(out.buffer);
  for (let i = 0; i < 4; i++) out[i] = MAGIC.charCodeAt(i);
  view.setUint32(4, 1, true);
  view.setUint32(8, file.nx, true);
  view.setUint32(12, file.ny, true);
  view.setFloat64(16, file.extent, true);
  view.setUint32(24, file.components.length, true);
  file.components.forEach((comp, c) => {
    if (comp.length !== n) {
      throw new SkgfError(`component ${c} has ${comp.length} values, expected ${n}`, 0);
    }
    const base = HEADER_BYTES + 8 * n * c;
    for (let k = 0; k < n; k++) view.setFloat64(base + 8 * k, comp[k], true);
  });
  return out;
}

/** Pixel (i, j) -> plane coordinates, matching the producer's layout. */
export function pixelCoords(file: SkgfFile, i: number, j: number): [number, number] {
  const dx = (2 * file.extent) / (file.nx - 1);
  const dy = (2 * file.extent) / (file.ny - 1);
  return [-file.extent + i * dx, -file.extent + j * dy];
}
