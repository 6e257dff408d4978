// Client-side mirror of the service's chain kind checker. The UI uses
// it to grey out inapplicable operations and to label the kind after
// each step, so a chain the service would reject on kind grounds is
// never submitted.

import type { ChainStep, Kind, ZoomMode } from "./types.js";

export const KIND_LABELS: Record<Kind, string> = {
  form0: "0-form",
  form1: "1-form",
  form2: "2-form",
  vf: "vector field",
};

// op name -> {input kind: output kind}; missing input kind = illegal
export const TRANSITIONS: Record<string, Partial<Record<Kind, Kind>>> = {
  ext_d: { form0: "form1", form1: "form2" },
  interior_d: { form1: "form0", form2: "form1" },
  hodge: { form0: "form2", form1: "form1", form2: "form0" },
  covariant: { vf: "form1" },
  contravariant: { form1: "vf" },
};

// the same refusal wording the service uses
const REASONS: Record<string, string> = {
  "ext_d/form2": "exterior derivative of a top-degree form is zero",
  "ext_d/vf": "exterior derivative applies to forms, not vector fields",
  "interior_d/form0": "interior derivative applies to 1-forms and 2-forms",
  "interior_d/vf": "interior derivative applies to 1-forms and 2-forms",
  "hodge/vf": "hodge applies to forms, not vector fields",
};

export interface ChainCheck {
  kinds: Kind[]; // kind after each accepted step
  finalKind: Kind;
  error?: string; // set when some step is illegal; kinds stop before it
}

export function checkChain(kind: Kind, chain: ChainStep[]): ChainCheck {
  const kinds: Kind[] = [];
  let current = kind;
  for (let i = 0; i < chain.length; i++) {
    const op = chain[i].op;
    const table = TRANSITIONS[op];
    if (table === undefined) {
      return { kinds, finalKind: current, error: `step ${i + 1}: unknown operation '${op}'` };
    }
    const next = table[current];
    if (next === undefined) {
      const why = REASONS[`${op}/${current}`] ?? `${op} cannot take a ${current}`;
      return { kinds, finalKind: current, error: `step ${i + 1} (${op}): ${why}` };
    }
    current = next;
    kinds.push(current);
  }
  return { kinds, finalKind: current };
}

// ops whose buttons should be enabled for the current final kind
export function legalOps(kind: Kind): string[] {
  return Object.keys(TRANSITIONS).filter((op) => TRANSITIONS[op][kind] !== undefined);
}

export function zoomAllowed(kind: Kind, mode: ZoomMode): string | null {
  if (mode === "zoom") {
    return kind === "form0" ? "zoom applies to 1-forms, 2-forms and vector fields" : null;
  }
  return kind === "vf" ? null : `${mode} insets apply to vector fields`;
}
