/** Wires the tree view, settings menu, and command box to one session. */

import { Announcer } from "./announcer.js";
import { CommandBox } from "./commandBox.js";
import { SessionClient } from "./protocol.js";
import { SettingsMenu } from "./settingsMenu.js";
import { TreeView } from "./treeView.js";

export interface App {
  client: SessionClient;
  tree: TreeView;
  settings: SettingsMenu;
  commands: CommandBox;
  announcer: Announcer;
  banner: HTMLElement;
}

export async function createApp(root: HTMLElement, baseUrl: string): Promise<App> {
  const client = new SessionClient(baseUrl);
  const announcer = new Announcer(root);

  const banner = document.createElement("div");
  banner.setAttribute("role", "alert");
  banner.className = "error-banner";
  banner.hidden = true;
  root.appendChild(banner);
  const showError = (message: string) => {
    banner.hidden = false;
    banner.textContent = message;
    announcer.announce(message);
  };

  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";
  root.appendChild(toolbar);

  const treeContainer = document.createElement("div");
  root.appendChild(treeContainer);
  const tree = new TreeView(treeContainer, client, announcer, showError);

  const refreshAfterChange = async () => {
    await tree.refreshLabels();
    try {
      const state = await client.getSettings();
      commands.setOptions(commands.defaultOptions(
        (state.settings.custom as { level: string; name: string }[]) ?? []));
    } catch {
      // tree refresh already surfaced any connection problem
    }
  };

  const settings = new SettingsMenu(toolbar, client, announcer, refreshAfterChange);
  const commandContainer = document.createElement("div");
  root.appendChild(commandContainer);
  const commands = new CommandBox(commandContainer, client, announcer, refreshAfterChange);

  try {
    const init = await client.init();
    announcer.announce(init.announcement.text);
    const settingsState = await client.getSettings();
    commands.setOptions(commands.defaultOptions(
      (settingsState.settings.custom as { level: string; name: string }[]) ?? []));
    await tree.refresh();
    tree.focusCursor();
  } catch (err) {
    showError(`connection lost: ${(err as Error).message}`);
  }

  return { client, tree, settings, commands, announcer, banner };
}
