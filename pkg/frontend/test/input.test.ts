import { describe, expect, it } from "vitest";
import { InMsg } from "../src/protocol.js";
import { parseTrajectoryCsv, playback, PointerSampler, toTrajectoryCsv } from "../src/input.js";

function collectSampler(rateHz = 30, bufferSeconds = 2) {
  const sent: InMsg[] = [];
  let online = true;
  let dropped = 0;
  let clock = 100.0;
  const sampler = new PointerSampler({
    rateHz,
    send: (msg) => {
      if (!online) return false;
      sent.push(msg);
      return true;
    },
    now: () => clock,
    bufferSeconds,
    onDrop: (n) => (dropped += n),
  });
  return {
    sampler,
    sent,
    setOnline: (v: boolean) => (online = v),
    advance: (dt: number) => (clock += dt),
    droppedCount: () => dropped,
  };
}

const inputs = (sent: InMsg[]) => sent.map((m) => ("input" in m ? m.input : null)!).filter(Boolean);

describe("PointerSampler", () => {
  it("a stationary pointer produces a stream of constant points", () => {
    const h = collectSampler();
    h.sampler.update(0.4, -0.2);
    for (let k = 0; k < 10; k++) {
      h.sampler.sampleNow();
      h.advance(1 / 30);
    }
    const pts = inputs(h.sent);
    expect(pts).toHaveLength(10);
    expect(pts.every((p) => p.x === 0.4 && p.y === -0.2)).toBe(true);
  });

  it("timestamps are strictly increasing even when the clock stalls", () => {
    const h = collectSampler();
    h.sampler.update(0, 0);
    for (let k = 0; k < 50; k++) {
      h.sampler.sampleNow();
      if (k % 3 !== 0) h.advance(1 / 30); // clock occasionally fails to move
    }
    const ts = inputs(h.sent).map((p) => p.t);
    for (let i = 1; i < ts.length; i++) {
      expect(ts[i]).toBeGreaterThan(ts[i - 1]);
    }
  });

  it("decimates raw events to the sampling clock", () => {
    const h = collectSampler();
    for (let e = 0; e < 25; e++) h.sampler.update(e, e); // a burst of raw moves
    h.sampler.sampleNow(); // one clock tick -> one sample, the latest position
    const pts = inputs(h.sent);
    expect(pts).toHaveLength(1);
    expect(pts[0].x).toBe(24);
  });

  it("emits nothing before the first pointer event", () => {
    const h = collectSampler();
    h.sampler.sampleNow();
    expect(h.sent).toHaveLength(0);
  });

  it("buffers up to the limit while disconnected, then drops with notice", () => {
    const h = collectSampler(30, 2); // 60-sample buffer
    h.sampler.update(1, 1);
    h.setOnline(false);
    for (let k = 0; k < 80; k++) {
      h.sampler.sampleNow();
      h.advance(1 / 30);
    }
    expect(h.sampler.bufferedCount).toBe(60);
    expect(h.droppedCount()).toBe(20);
    h.setOnline(true);
    h.sampler.sampleNow(); // flushes the backlog in order before the new sample
    const ts = inputs(h.sent).map((p) => p.t);
    expect(ts).toHaveLength(61);
    for (let i = 1; i < ts.length; i++) expect(ts[i]).toBeGreaterThan(ts[i - 1]);
  });
});

describe("trajectory CSV", () => {
  const csv = "# rate=30 closed=0\nt,x,y\n0,1,0\n0.1,0.9,0.1\n0.2,0.8,0.2\n";

  it("parses metadata, header, and rows", () => {
    const records = parseTrajectoryCsv(csv);
    expect(records).toHaveLength(3);
    expect(records[1]).toEqual({ t: 0.1, x: 0.9, y: 0.1 });
  });

  it("rejects a missing header with the line number", () => {
    expect(() => parseTrajectoryCsv("0,1,0\n")).toThrow(/line 1/);
  });

  it("rejects non-monotone timestamps", () => {
    expect(() => parseTrajectoryCsv("t,x,y\n0,0,0\n0.2,1,1\n0.1,2,2\n")).toThrow(/increasing/);
  });

  it("round-trips through the exporter", () => {
    const records = parseTrajectoryCsv(csv);
    expect(parseTrajectoryCsv(toTrajectoryCsv(records, 30))).toEqual(records);
  });

  it("handles CRLF input", () => {
    expect(parseTrajectoryCsv(csv.replace(/\n/g, "\r\n"))).toHaveLength(3);
  });
});

describe("playback", () => {
  it("replays a recording through the same send path as live input", () => {
    const live: InMsg[] = [];
    const replayed: InMsg[] = [];

    // live capture: pointer follows a scripted path on a fixed clock
    const h = collectSampler();
    const path = [
      [1.0, 0.0],
      [0.95, 0.31],
      [0.81, 0.59],
    ];
    for (const [x, y] of path) {
      h.sampler.update(x, y);
      h.sampler.sampleNow();
      h.advance(1 / 30);
    }
    live.push(...h.sent);

    // export the capture, then replay the CSV through a fresh send path
    const records = parseTrajectoryCsv(toTrajectoryCsv(inputs(live), 30));
    const sent = playback(records, (msg) => {
      replayed.push(msg);
      return true;
    });

    expect(sent).toBe(live.length);
    expect(replayed).toEqual(live);
  });

  it("reports how many samples the transport accepted", () => {
    const records = [
      { t: 0, x: 0, y: 0 },
      { t: 0.1, x: 1, y: 1 },
    ];
    let calls = 0;
    const sent = playback(records, () => ++calls === 1);
    expect(sent).toBe(1);
  });
});
