// Preview-side tag helpers for the wizard: the composed tag shown while
// declaring levels must always equal the canonical form of the current
// choices. Board data (ranks, frontiers, filters) is never computed
// here; it comes from the service.

export type Dimension = "PT" | "TL" | "TD";

export const DIMENSIONS: Dimension[] = ["PT", "TL", "TD"];
export const LEVELS = [0, 1, 2, 3, 4, 5] as const;
export const MAX_LEVEL = 5;

export interface Levels {
  pt: number;
  tl: number;
  td: number;
}

export function formatTag(levels: Levels): string {
  return `SLS-${levels.pt}-${levels.tl}-${levels.td}`;
}

export function composeLevels(stages: Levels[]): Levels {
  if (stages.length === 0) {
    throw new Error("cannot compose an empty stage list");
  }
  return {
    pt: Math.max(...stages.map((s) => s.pt)),
    tl: Math.max(...stages.map((s) => s.tl)),
    td: Math.max(...stages.map((s) => s.td)),
  };
}

const TAG_PATTERN = /^SLS-([0-5])-([0-5])-([0-5])$/i;

// Lenient parse used for URL state and previews; returns null rather
// than throwing because the service is the validator of record.
export function parseTag(text: string): Levels | null {
  const match = TAG_PATTERN.exec(text.trim());
  if (!match) {
    return null;
  }
  return {
    pt: Number(match[1]),
    tl: Number(match[2]),
    td: Number(match[3]),
  };
}

export function levelOf(levels: Levels, dimension: Dimension): number {
  switch (dimension) {
    case "PT":
      return levels.pt;
    case "TL":
      return levels.tl;
    case "TD":
      return levels.td;
  }
}
