import type { Catalog, PerspectiveId, SheetDocument } from './types';

export interface PartialScore {
  sum: number;
  answered: number;
  total: number; // slot count, normally 30
  perSpective: Record<PerspectiveId, number>;
  complete: boolean;
}

/**
 * Running preview over the SET values only. This is a client-side preview:
 * the authoritative score always comes from the service's score endpoint.
 */
export function partialScore(sheet: SheetDocument, catalog: Catalog): PartialScore {
  const perSpective = {} as Record<PerspectiveId, number>;
  for (const p of catalog.perspectives) perSpective[p.id] = 0;
  const byNumber = new Map(catalog.heuristics.map((h) => [h.number, h]));
  let sum = 0;
  let answered = 0;
  for (const slot of sheet.responses) {
    if (slot.value === null) continue;
    answered += 1;
    sum += slot.value;
    const heuristic = byNumber.get(slot.number);
    if (heuristic) perSpective[heuristic.perspective] += slot.value;
  }
  return {
    sum,
    answered,
    total: sheet.responses.length,
    perSpective,
    complete: answered === sheet.responses.length,
  };
}

export function unsetNumbers(sheet: SheetDocument): number[] {
  return sheet.responses.filter((slot) => slot.value === null).map((slot) => slot.number);
}
