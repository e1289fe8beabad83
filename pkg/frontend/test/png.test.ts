import { describe, expect, it } from "vitest";
import { inflateSync } from "node:zlib";
import { PHYS_200DPI, encodePng } from "../src/png.js";

describe("encodePng", () => {
  it("produces a well-formed 200-dpi PNG", () => {
    const w = 3;
    const h = 2;
    const rgba = new Uint8Array(w * h * 4).fill(255);
    const buf = encodePng(w, h, rgba);
    expect([...buf.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    expect(buf.subarray(12, 16).toString("ascii")).toBe("IHDR");
    expect(buf.readUInt32BE(16)).toBe(w);
    expect(buf.readUInt32BE(20)).toBe(h);
    const physAt = buf.indexOf("pHYs");
    expect(physAt).toBeGreaterThan(0);
    expect(buf.readUInt32BE(physAt + 4)).toBe(PHYS_200DPI);
    expect(PHYS_200DPI).toBe(7874);
  });

  it("round-trips pixel data through the IDAT stream", () => {
    const w = 2;
    const h = 2;
    const rgba = new Uint8Array([...Array(w * h * 4).keys()].map((i) => (i * 7) % 256));
    const buf = encodePng(w, h, rgba);
    const idatAt = buf.indexOf("IDAT");
    const len = buf.readUInt32BE(idatAt - 4);
    const raw = inflateSync(buf.subarray(idatAt + 4, idatAt + 4 + len));
    expect(raw.length).toBe(h * (1 + w * 4));
    expect(raw[0]).toBe(0); // filter byte
    expect([...raw.subarray(1, 1 + w * 4)]).toEqual([...rgba.subarray(0, w * 4)]);
  });

  it("rejects a wrong-sized buffer", () => {
    expect(() => encodePng(2, 2, new Uint8Array(3))).toThrow(/expected/);
  });
});
