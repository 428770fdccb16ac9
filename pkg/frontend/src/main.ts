import { CdsClient } from './api';
import { mountHistory } from './history';
import type { Catalog } from './types';
import { mountWizard } from './wizard';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = '',
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

async function boot(root: HTMLElement, client: CdsClient): Promise<void> {
  let catalog: Catalog;
  try {
    catalog = await client.getCatalog();
  } catch {
    root.innerHTML = '';
    const retry = el('button', 'primary', 'Retry');
    retry.addEventListener('click', () => void boot(root, client));
    root.append(el('p', 'banner', 'Cannot reach the critique service.'), retry);
    return;
  }

  root.innerHTML = '';
  const tabs = el('nav', 'tabs');
  const critiqueTab = el('button', 'tab active', 'Critique');
  const historyTab = el('button', 'tab', 'History');
  tabs.append(critiqueTab, historyTab);
  const view = el('div', 'view');
  root.append(tabs, view);

  function showCritique(): void {
    critiqueTab.classList.add('active');
    historyTab.classList.remove('active');
    view.innerHTML = '';

    const form = el('form', 'start-form');
    const artefact = el('input');
    artefact.placeholder = 'artefact key (e.g. poster-2025)';
    artefact.required = true;
    const appraiser = el('input');
    appraiser.placeholder = 'appraiser';
    appraiser.required = true;
    const start = el('button', 'primary', 'Start critique');
    start.type = 'submit';
    form.append(artefact, appraiser, start);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void client
        .createDraft(artefact.value.trim(), appraiser.value.trim())
        .then((sheet) => {
          view.innerHTML = '';
          mountWizard(view, client, catalog, sheet);
        });
    });
    view.appendChild(form);
  }

  function openSheet(sheetId: string): void {
    critiqueTab.classList.add('active');
    historyTab.classList.remove('active');
    void client.getSheet(sheetId).then((sheet) => {
      view.innerHTML = '';
      mountWizard(view, client, catalog, sheet);
    });
  }

  function showHistory(): void {
    historyTab.classList.add('active');
    critiqueTab.classList.remove('active');
    view.innerHTML = '';
    mountHistory(view, client, catalog, openSheet);
  }

  critiqueTab.addEventListener('click', showCritique);
  historyTab.addEventListener('click', showHistory);
  showCritique();
}

const rootEl = document.getElementById('app');
if (rootEl) {
  void boot(rootEl, new CdsClient(''));
}
